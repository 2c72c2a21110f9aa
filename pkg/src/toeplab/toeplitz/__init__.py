"""Toeplitz symbols, numerical kernels and the descriptor grammar."""

from toeplab.toeplitz.engine import KernelBasis, ToeplitzSymbol, numerical_kernel
from toeplab.toeplitz.descriptors import parse_function, parse_symbol

__all__ = ["KernelBasis", "ToeplitzSymbol", "numerical_kernel", "parse_function", "parse_symbol"]
