"""Sampled boundary functions on the unit circle and their Hardy-space views."""
