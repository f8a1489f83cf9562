"""Energy of complex unit gain dumbbell graphs.

Two independent routes compute the energy of ``D_{r,s,l}`` with cycle gains
``gamma_r, gamma_s``: dense Hermitian eigenvalues (:func:`energy_eig`) and the
closed-form Coulson kernels (:func:`coulson_energy`).  :mod:`.search` runs the
grid-plus-refinement extremal search on top of them.
"""

from .graphs import (
    DumbbellParams,
    GainSpec,
    ParityCase,
    build_dumbbell,
    energy_eig,
    energy_eig_ab,
    gains_from_alpha_beta,
    hermitian_adjacency,
    normalize_gains,
)
from .coulson import CoulsonObjective, coulson_energy, coulson_energy_ab, make_kernel

__version__ = "0.1.0"

__all__ = [
    "CoulsonObjective",
    "DumbbellParams",
    "GainSpec",
    "ParityCase",
    "build_dumbbell",
    "coulson_energy",
    "coulson_energy_ab",
    "energy_eig",
    "energy_eig_ab",
    "gains_from_alpha_beta",
    "hermitian_adjacency",
    "make_kernel",
    "normalize_gains",
]
