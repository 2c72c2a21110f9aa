"""Backend bridge shared by the CLI and scripting callers."""

from toeplab.bridge.backend import BackendBridge, BridgeError, ExecutionMode

__all__ = ["BackendBridge", "BridgeError", "ExecutionMode"]
