"""CLI adapter package."""
