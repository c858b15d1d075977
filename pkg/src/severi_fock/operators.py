"""The transfer operator M_{F_k}, its adjoint and primed variants.

    M = sum_{i>0} alpha_{-i}[p] alpha_i[p]
        + Q1^k Q2 sum_{|mu| - k = |nu| >= 0} u^(l(mu)-1) alpha_{-mu}[1] alpha_nu[1]

The first sum moves one 1-weighted part to the p-side.  The second removes a
sub-multiset ``nu`` of the p-side and creates ``mu`` on the 1-side.

:func:`build_M_from_fields` constructs the same operator from the field
expansion ``1/2 u^-1 A(z)^2 |z^0 + Q2 u^-1 exp(B(z)) |z^-k`` using only single
ladder operators and formal z-series; it shares no code with the direct rows.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Optional, Tuple

from .coeffring import Coefficient, Truncation
from .fock import (
    BasisState,
    FockVector,
    _Accumulator,
    annihilate_one,
    annihilate_point,
    composite_creation_scalar,
    create_one,
    create_point,
)
from .partitions import Partition, aut_size, partitions_of, sub_multisets

U_CONVENTIONS = ("printed", "alternate")
CAP_CONVENTIONS = ("printed", "corrected")


@dataclass(frozen=True)
class OperatorConfig:
    """Surface index plus the convention switches.

    ``u_convention``: ``printed`` weights the second sum by u^(l(mu)-1),
    ``alternate`` by u^(l(mu)+l(nu)-1).  ``cap_convention`` is read by
    :mod:`severi_fock.caps`.  ``trunc=None`` lets the engine pick the
    smallest sufficient truncation for each request.
    """

    k: int
    u_convention: str = "printed"
    cap_convention: str = "corrected"
    trunc: Optional[Truncation] = None

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("Hirzebruch index must be nonnegative")
        if self.u_convention not in U_CONVENTIONS:
            raise ValueError(f"unknown u convention {self.u_convention!r}")
        if self.cap_convention not in CAP_CONVENTIONS:
            raise ValueError(f"unknown cap convention {self.cap_convention!r}")

    def with_trunc(self, trunc: Optional[Truncation]) -> "OperatorConfig":
        return replace(self, trunc=trunc)

    @property
    def fingerprint(self) -> str:
        return f"caps={self.cap_convention},u={self.u_convention}"


def _u_exponent(cfg: OperatorConfig, created: Partition, annihilated: Partition) -> int:
    if cfg.u_convention == "printed":
        return len(created) - 1
    return len(created) + len(annihilated) - 1


def _b_weight(cfg: OperatorConfig, primed: bool, e_u: int) -> Optional[Coefficient]:
    e_q1 = 0 if primed else cfg.k
    if cfg.trunc is not None and not cfg.trunc.keeps(e_q1, 1):
        return None
    return Coefficient.monomial(e_u, e_q1, 1)


def _move_rows(s: BasisState):
    # sum_i alpha_{-i}[p] alpha_i[p]
    for i in sorted(set(s.mu)):
        yield BasisState(s.mu.remove((i,)), s.nu.union((i,))), i * (s.nu.multiplicity(i) + 1)


@lru_cache(maxsize=None)
def _row(cfg: OperatorConfig, s: BasisState, adjoint: bool, primed: bool
         ) -> Tuple[Tuple[BasisState, Coefficient], ...]:
    acc = _Accumulator(cfg.trunc)
    one = Coefficient.constant(1)
    for t, scalar in _move_rows(s):
        acc.add_scaled(t, one, Fraction(scalar))
    for removed in sub_multisets(s.nu):
        rest = BasisState(s.mu, s.nu.remove(removed))
        inv_aut = Fraction(1, aut_size(removed))
        target = removed.size - cfg.k if adjoint else removed.size + cfg.k
        for created in partitions_of(target):
            if adjoint:
                # (u^e alpha_{-a} alpha_c)^dagger = u^(e + l(c) - l(a)) alpha_{-c} alpha_a
                e_u = _u_exponent(cfg, removed, created) + len(created) - len(removed)
            else:
                e_u = _u_exponent(cfg, created, removed)
            weight = _b_weight(cfg, primed, e_u)
            if weight is None:
                continue
            scalar = inv_aut * composite_creation_scalar(rest.mu, created)
            acc.add(BasisState(rest.mu.union(created), rest.nu), weight.scale(scalar), one)
    return tuple(sorted(acc.result().terms.items(),
                        key=lambda kv: (kv[0].size, tuple(kv[0].mu), tuple(kv[0].nu))))


def _apply(cfg: OperatorConfig, x: FockVector, adjoint: bool, primed: bool) -> FockVector:
    acc = _Accumulator(cfg.trunc)
    for s, c in x.terms.items():
        for t, coeff in _row(cfg, s, adjoint, primed):
            acc.add(t, c, coeff)
    return acc.result()


def apply_M(cfg: OperatorConfig, x: FockVector) -> FockVector:
    return _apply(cfg, x, adjoint=False, primed=False)


def apply_M_adjoint(cfg: OperatorConfig, x: FockVector) -> FockVector:
    return _apply(cfg, x, adjoint=True, primed=False)


def apply_M_primed(cfg: OperatorConfig, x: FockVector) -> FockVector:
    """M' : the second sum carries Q2 alone (no Q1^k)."""
    return _apply(cfg, x, adjoint=False, primed=True)


def apply_M_primed_adjoint(cfg: OperatorConfig, x: FockVector) -> FockVector:
    return _apply(cfg, x, adjoint=True, primed=True)


def q1_weight(x: FockVector, trunc: Optional[Truncation] = None) -> FockVector:
    """Scale |mu, nu> by Q1^(|mu| + |nu|)."""
    out = {}
    for s, c in x.terms.items():
        c = c.shift(0, s.size, 0, trunc)
        if c:
            out[s] = c
    return FockVector(out)


def clear_row_cache() -> None:
    _row.cache_clear()


# ---- field construction -----------------------------------------------------

Graded = Dict[Tuple[int, int], FockVector]  # (z degree, Q1 shift) -> vector

_U = Coefficient.monomial(1, 0, 0)


def _add_graded(target: Graded, key, vec: FockVector) -> None:
    if not vec:
        return
    if key in target:
        vec = target[key] + vec
    if vec:
        target[key] = vec
    else:
        target.pop(key, None)


def _apply_A(graded: Graded, cutoff: int) -> Graded:
    """A(z,u) = sum_{i>0} alpha_i[p] z^i + u sum_{i>0} alpha_{-i}[p] z^-i."""
    out: Graded = {}
    for (z, q), vec in graded.items():
        for i in range(1, cutoff + 1):
            _add_graded(out, (z + i, q), annihilate_point(i, vec))
            _add_graded(out, (z - i, q), create_point(i, vec).scale(_U))
    return out


def _series_exp(start: Graded, step: Callable[[Graded], Graded]) -> Graded:
    """sum_j step^j(start) / j!, for a nilpotent-on-start step."""
    total: Graded = {}
    term = start
    j = 0
    while term:
        for key, vec in term.items():
            _add_graded(total, key, vec)
        j += 1
        term = {key: vec.scale(Fraction(1, j)) for key, vec in step(term).items()}
    return total


def build_M_from_fields(cfg: OperatorConfig) -> Callable[[FockVector], FockVector]:
    """Return x -> M x computed from the field expansion."""
    k = cfg.k
    u_on_plus = cfg.u_convention == "alternate"
    half_u_inv = Coefficient.monomial(-1, 0, 0, Fraction(1, 2))

    def b_plus(graded: Graded) -> Graded:
        # sum_{i>0} alpha_i[1] Q1^-i z^i  (times u under the alternate convention)
        out: Graded = {}
        for (z, q), vec in graded.items():
            top = max((max(s.nu, default=0) for s in vec.terms), default=0)
            for i in range(1, top + 1):
                piece = annihilate_one(i, vec)
                if u_on_plus:
                    piece = piece.scale(_U)
                _add_graded(out, (z + i, q - i), piece)
        return out

    def b_minus(graded: Graded) -> Graded:
        # u sum_{i>0} alpha_{-i}[1] Q1^i z^-i, only as far as z = -k is reachable
        out: Graded = {}
        for (z, q), vec in graded.items():
            for i in range(1, z + k + 1):
                _add_graded(out, (z - i, q + i), create_one(i, vec).scale(_U))
        return out

    def apply(x: FockVector) -> FockVector:
        result = FockVector()
        cutoff = x.max_size()
        squared = _apply_A(_apply_A({(0, 0): x}, cutoff), cutoff)
        if (0, 0) in squared:
            result = result + squared[(0, 0)].scale(half_u_inv)
        after_plus = _series_exp({(0, 0): x}, b_plus)
        after_minus = _series_exp(after_plus, b_minus)
        for (z, q), vec in sorted(after_minus.items()):
            if z != -k:
                continue
            if q < 0:
                raise AssertionError("negative Q1 power survived z-extraction")
            result = result + vec.scale(Coefficient.monomial(-1, q, 1))
        return result.truncate(cfg.trunc)

    return apply
