"""Algebroid functions: algebraic structure, monodromy and value distribution."""

from .polyalg import INF, AlgebroidEquation, CPoly, Z, equation

__all__ = ["INF", "AlgebroidEquation", "CPoly", "Z", "equation"]
__version__ = "0.1.0"
