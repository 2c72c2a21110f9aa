"""Isometric multipliers onto model spaces and related representations."""
