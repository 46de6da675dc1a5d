"""Counting tools for 2x2 matrix groups over finite truncated valuation rings,
and convergence abscissae for Dirichlet series built from products of linear
forms (including the root-system case)."""

__version__ = "0.1.0"
