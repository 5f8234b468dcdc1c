"""Special functions (Li2, Bloch-Wigner, extended Rogers) and complex volume assembly."""

from dehn_volume.dilog.functions import (
    PI_SQUARED,
    bloch_wigner,
    li2,
    principal_log,
    rogers_extended,
)
from dehn_volume.dilog.volume import (
    Modulus,
    VolumeReport,
    complex_volume,
    psi,
    psi_difference,
    reduce_psi,
    reduce_real,
    volume_bw,
)

__all__ = [
    "PI_SQUARED",
    "Modulus",
    "VolumeReport",
    "bloch_wigner",
    "complex_volume",
    "li2",
    "principal_log",
    "psi",
    "psi_difference",
    "reduce_psi",
    "reduce_real",
    "rogers_extended",
    "volume_bw",
]
