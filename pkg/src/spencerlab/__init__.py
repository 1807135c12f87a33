"""Symbolic-numeric workbench for linear PDE systems: jet and Spencer
calculus, microlocal classification, characteristic-class index integrals,
and zeta-regularized torsion invariants."""

__version__ = "0.1.0"
