"""Boundary vectors: the vacuum, the left cap ``v`` and the right caps ``w_k``.

Each ``w_k`` is the exponential of a sum of cap components.  A component is a
connected curve on the end surface of genus ``h`` and class ``sF + tE`` meeting
the gluing divisor in free parts ``free`` and fixed parts ``fixed``; it adds

    c * Q1^s Q2^t u^(h + l(free) + l(fixed) - 1) * prod alpha_{-f}[p] * prod alpha_{-g}[1]

to the exponent (raw products of single creations, not the ``1/|Aut|``
composites).  The tables below list these components for k <= 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, NamedTuple, Optional, Tuple

from .coeffring import Coefficient, Truncation
from .fock import VACUUM, BasisState, FockVector, create_one, create_point
from .partitions import EMPTY, Partition, ones

CAP_KINDS = ("v_empty", "v", "w0", "w1", "w2", "w3")


class CapComponent(NamedTuple):
    h: int
    s: int
    t: int
    free: Partition
    fixed: Partition
    coeff: Fraction

    def u_exponent(self) -> int:
        return self.h + len(self.free) + len(self.fixed) - 1

    def monomial(self) -> Coefficient:
        return Coefficient.monomial(self.u_exponent(), self.s, self.t, self.coeff)


@dataclass(frozen=True)
class CapVector:
    vec: FockVector
    provenance: str
    convention: str


def _comp(h, s, t, free=(), fixed=(), coeff=1) -> CapComponent:
    return CapComponent(h, s, t, Partition(free), Partition(fixed), Fraction(coeff))


def cap_table(k: int, convention: str = "corrected", max_q1: int = 0) -> List[CapComponent]:
    """Cap components of ``w_k``; the infinite family for k=3 is cut at ``max_q1``.

    Under ``printed`` the fiber component of w_0 and w_1 meets the divisor in a
    free point instead of a fixed one.
    """
    if convention not in ("printed", "corrected"):
        raise ValueError(f"unknown cap convention {convention!r}")
    fiber = _comp(0, 1, 0, free=(1,)) if convention == "printed" else _comp(0, 1, 0, fixed=(1,))
    if k == 0:
        return [fiber]
    if k == 1:
        return [fiber, _comp(0, 0, 1)]
    if k == 2:
        return [_comp(0, 1, 0, fixed=(1,)), _comp(0, 1, 1, fixed=(1,))]
    if k == 3:
        out = [
            _comp(0, 1, 0, fixed=(1,)),
            _comp(0, 2, 1, fixed=(1, 1), coeff=Fraction(1, 2)),
            # the moduli integral for fixed (2) is 2, the recorded coefficient is 1
            _comp(0, 2, 1, fixed=(2,), coeff=1),
        ]
        for a in range(1, max_q1 + 1):
            out.append(_comp(0, a, a, free=(a,), coeff=Fraction((-1) ** (a - 1), a * a)))
        return out
    raise ValueError(f"right cap w_{k} is only known for k <= 3")


def _apply_component(comp: CapComponent, x: FockVector, trunc: Truncation) -> FockVector:
    for part in comp.free:
        x = create_point(part, x)
    for part in comp.fixed:
        x = create_one(part, x)
    return x.scale(comp.monomial(), trunc)


def _exp_series(components: Iterable[CapComponent], start: FockVector,
                trunc: Truncation) -> FockVector:
    """exp(sum of components) applied to ``start`` by the power series."""
    components = list(components)
    total = start
    term = start
    j = 0
    while term:
        j += 1
        nxt = FockVector()
        for comp in components:
            nxt = nxt + _apply_component(comp, term, trunc)
        term = nxt.scale(Fraction(1, j))
        total = total + term
    return total


def _check_trunc(trunc: Truncation) -> None:
    if not isinstance(trunc, Truncation):
        raise TypeError("caps need an explicit Truncation")


@lru_cache(maxsize=None)
def vector_w(k: int, trunc: Truncation, convention: str = "corrected") -> CapVector:
    _check_trunc(trunc)
    table = cap_table(k, convention, trunc.max_q1)
    vec = _exp_series(table, FockVector.basis(VACUUM), trunc)
    return CapVector(vec, f"w{k}", convention)


def vector_w_factored(k: int, trunc: Truncation, convention: str = "corrected") -> FockVector:
    """Same vector as :func:`vector_w`, built as a product of one-component exponentials."""
    _check_trunc(trunc)
    x = FockVector.basis(VACUUM)
    for comp in cap_table(k, convention, trunc.max_q1):
        x = _exp_series([comp], x, trunc)
    return x


@lru_cache(maxsize=None)
def vector_v(trunc: Truncation) -> CapVector:
    """exp(alpha_{-1}[1]) v_0 = sum_d |1^d, 0>, for d up to the Q1 bound."""
    _check_trunc(trunc)
    vec = FockVector({BasisState(ones(d), EMPTY): Coefficient.constant(1)
                      for d in range(trunc.max_q1 + 1)})
    return CapVector(vec, "v", "n/a")


def vector_v_empty() -> CapVector:
    return CapVector(FockVector.basis(VACUUM), "v_empty", "n/a")


def support_ok(cap: FockVector, k: int) -> bool:
    """Every monomial Q1^a Q2^b obeys a >= floor(k/2) * b."""
    m = k // 2
    for c in cap.terms.values():
        for (_, a, b) in c.terms:
            if a < m * b:
                return False
    return True


def grading_defect(s: BasisState, e_u: int, e_q2: int, k: int) -> int:
    """e + (2-k) t + |a| - l(a) + |b| for a ket term; zero on every cap term."""
    return e_u + (2 - k) * e_q2 + s.mu.size - len(s.mu) + s.nu.size
