"""Inner-outer splitting, maximal functions and their factorisations."""
