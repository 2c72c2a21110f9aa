"""toeplab: a numerical laboratory for Toeplitz kernels in the Hardy space."""

__version__ = "0.1.0"

__all__ = ["__version__"]
