"""Hermite-Pade polynomials and analytic continuation of germs beyond their disc of convergence."""
