"""Exact Fock-space computation of Severi degrees and Gromov-Witten invariants
of P^2 and the Hirzebruch surfaces F_k, k <= 3."""

from .coeffring import Coefficient, Truncation
from .engine import (
    ENGINE_VERSION,
    TruncationError,
    ab_check,
    blockgoettsche_Z,
    connected_from_disconnected,
    deformation_check,
    gw_invariant,
    p2_relative,
    p2_severi,
    relative_invariant,
    transverse_invariant,
)
from .fock import BasisState, FockVector
from .operators import OperatorConfig
from .partitions import Partition

__version__ = ENGINE_VERSION

__all__ = [
    "BasisState", "Coefficient", "ENGINE_VERSION", "FockVector", "OperatorConfig",
    "Partition", "Truncation", "TruncationError", "ab_check", "blockgoettsche_Z",
    "connected_from_disconnected", "deformation_check", "gw_invariant", "p2_relative",
    "p2_severi", "relative_invariant", "transverse_invariant",
]
