"""
Dehn-Volume: complex volumes of Dehn fillings from deformed Ptolemy varieties.

Builds the σ-deformed Ptolemy system of an ideal triangulation, solves it for
boundary holonomy compatible with a Dehn filling, lifts the boundary data to a
log-cocycle, assembles flattenings and sums extended Rogers dilogarithms to
obtain Vol + i·CS of the filled manifold.
"""

__version__ = "0.1.0"
__author__ = "Dehn-Volume contributors"
__license__ = "MIT"
