"""Quantum dynamics of symmetry breaking in a finite harmonic crystal."""

__version__ = "0.1.0"
