"""Inner functions, model-space kernels and Crofoot transforms."""
