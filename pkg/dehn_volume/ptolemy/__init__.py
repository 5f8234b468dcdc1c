"""Deformed Ptolemy equations, their numerical solutions and derived geometry."""

from dehn_volume.ptolemy.natural import (
    FillingCheck,
    NaturalCocycle,
    check_filling_representation,
    holonomy,
    natural_cocycle,
    short_edge_params,
)
from dehn_volume.ptolemy.shapes import Shape, cross_ratios, edge_products, gluing_check
from dehn_volume.ptolemy.solver import SolverSettings, gauss_newton, solve
from dehn_volume.ptolemy.system import (
    PtolemyAssignment,
    PtolemySystem,
    build_system,
    gauge_classes,
)

__all__ = [
    "FillingCheck",
    "NaturalCocycle",
    "PtolemyAssignment",
    "PtolemySystem",
    "Shape",
    "SolverSettings",
    "build_system",
    "check_filling_representation",
    "cross_ratios",
    "edge_products",
    "gauge_classes",
    "gauss_newton",
    "gluing_check",
    "holonomy",
    "natural_cocycle",
    "short_edge_params",
    "solve",
]
