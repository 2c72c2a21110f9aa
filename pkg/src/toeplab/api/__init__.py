"""API adapter package."""

from toeplab.api.server import create_app

__all__ = ["create_app"]
