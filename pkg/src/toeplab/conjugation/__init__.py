"""The natural conjugation on Toeplitz kernels."""
