"""Flattenings and the conditions they satisfy around edges and along cusps."""

from dehn_volume.flattening.conditions import (
    IndependenceResult,
    cusp_condition_check,
    dehn_filling_check,
    edge_condition_check,
    edge_sums,
    path_sum,
    psi_independence_test,
    random_lift,
)
from dehn_volume.flattening.flattening import (
    FlatteningSet,
    TetrahedronFlattening,
    build_flattenings,
)

__all__ = [
    "FlatteningSet",
    "IndependenceResult",
    "TetrahedronFlattening",
    "build_flattenings",
    "cusp_condition_check",
    "dehn_filling_check",
    "edge_condition_check",
    "edge_sums",
    "path_sum",
    "psi_independence_test",
    "random_lift",
]
