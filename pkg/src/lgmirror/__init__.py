"""Exact Landau-Ginzburg mirror symmetry for invertible potentials."""
