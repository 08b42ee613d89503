"""Solvers for the 1D disordered nonlinear Schrödinger equation on a torus."""

__version__ = "0.1.0"
