"""Differential-operator model of the E-side evolution.

Polynomials live in variables ``x_i`` (fixed tangency of order i) and ``y_i``
(free tangency of order i).  A monomial ``x^a y^b`` is stored as the pair of
partitions ``(a, b)``.  The ladder dictionary is

    alpha_i[p] -> i d/dx_i,   alpha_{-i}[1] -> x_i,
    alpha_i[1] -> i d/dy_i,   alpha_{-i}[p] -> y_i.

With the u-rescaled identification |a, b> -> u^(-l(a)-l(b)) x^a y^b / (z(a) z(b))
the transposed operator becomes

    T = sum_i i y_i d/dx_i
        + Q2 u^-1 exp(sum_i i u z^i d/dy_i + z^-i x_i) |_{z^k}.

Evolving ``Y_0 = sum_d Q1^d u^-d x_1^d / d!`` by ``T`` produces a series whose
coefficient of ``x^a y^b u^(g-1) Q1^d1 Q2^d2`` after n steps is the relative
invariant with transverse C-side data, E-side fixed tangencies ``a`` and free
tangencies ``b``.  The printed z-exponent ``-k`` is available as an option.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterator, List, Optional, Tuple

from ..coeffring import Coefficient, Truncation, accumulate, from_raw
from ..partitions import EMPTY, Partition, aut_size, ones, partitions_of, sub_multisets

Monomial = Tuple[Partition, Partition]  # (x exponents, y exponents)


class DiffPoly:
    """Finite map from monomials to Coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Monomial, Coefficient]] = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffPoly) and self.terms == other.terms

    def coefficient(self, a, b) -> Coefficient:
        return self.terms.get((Partition(a), Partition(b)), Coefficient.zero())

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (tuple(kv[0][0]), tuple(kv[0][1])))


class _Collector:
    def __init__(self, trunc: Optional[Truncation]):
        self.trunc = trunc
        self.raw: Dict[Monomial, dict] = {}

    def add(self, mono: Monomial, c: Coefficient, factor: Coefficient) -> None:
        accumulate(self.raw.setdefault(mono, {}), c, factor, self.trunc)

    def result(self) -> DiffPoly:
        return DiffPoly({m: from_raw(t) for m, t in self.raw.items() if t})


def _y_dx(mono: Monomial) -> Iterator[Tuple[Monomial, int]]:
    # sum_i i y_i d/dx_i
    a, b = mono
    for i in sorted(set(a)):
        yield (a.remove((i,)), b.union((i,))), i * a.multiplicity(i)


def _shift_y(b: Partition) -> Iterator[Tuple[Partition, Partition, Fraction]]:
    """exp(sum_i c_i d/dy_i) y^b = prod (y_{b_j} + c_{b_j}): choose the replaced parts."""
    for r in sub_multisets(b):
        ways = 1
        for j in set(r):
            ways *= comb(b.multiplicity(j), r.multiplicity(j))
        yield r, b.remove(r), Fraction(ways)


def _exp_x(total: int) -> Iterator[Tuple[Partition, Fraction]]:
    """Part of exp(sum_i z^-i x_i) with z-degree -total: x^c / |Aut(c)|."""
    for c in partitions_of(total):
        yield c, Fraction(1, aut_size(c))


def apply_T(k: int, p: DiffPoly, trunc: Optional[Truncation] = None,
            z_sign: int = 1) -> DiffPoly:
    """One step of the transposed evolution; ``z_sign=-1`` uses z^(-k)."""
    out = _Collector(trunc)
    one = Coefficient.constant(1)
    target = z_sign * k
    for mono, c in p.terms.items():
        for new, scalar in _y_dx(mono):
            out.add(new, c, one.scale(scalar))
        a, b = mono
        for r, rest, ways in _shift_y(b):
            # each replaced y_j contributes j u z^j
            weight = ways
            for j in r:
                weight *= j
            created = r.size - target
            if created < 0:
                continue
            for cpart, inv_aut in _exp_x(created):
                factor = Coefficient.monomial(len(r) - 1, 0, 1, weight * inv_aut)
                out.add((a.union(cpart), rest), c, factor)
    return out.result()


def diffop_apply_Mprime_adjoint(k: int, p: DiffPoly, cfg=None) -> DiffPoly:
    """``apply_T`` with the truncation taken from an OperatorConfig."""
    return apply_T(k, p, cfg.trunc if cfg is not None else None)


def initial_series(max_d1: int) -> DiffPoly:
    return DiffPoly({(ones(d), EMPTY): Coefficient.monomial(-d, d, 0, Fraction(1, factorial(d)))
                     for d in range(max_d1 + 1)})


def evolve(k: int, trunc: Truncation, max_steps: int, z_sign: int = 1) -> List[DiffPoly]:
    """Y_0, Y_1, ... until the series dies or ``max_steps`` is reached."""
    ys = [initial_series(trunc.max_q1)]
    while len(ys) <= max_steps and ys[-1]:
        ys.append(apply_T(k, ys[-1], trunc, z_sign))
    return ys


def to_diffpoly(vec) -> DiffPoly:
    """Image of a FockVector under the u-rescaled dictionary."""
    from ..partitions import zfactor

    out = {}
    for s, c in vec.terms.items():
        scale = Fraction(1, zfactor(s.mu) * zfactor(s.nu))
        out[(s.mu, s.nu)] = c.shift(-(len(s.mu) + len(s.nu))).scale(scale)
    return DiffPoly(out)


def diffop_evolution_check(k: int, trunc: Truncation, cfg=None, max_steps: int = 40,
                           z_sign: int = 1) -> dict:
    """Compare every evolved coefficient with the Fock relative invariants.

    Both directions are checked: each nonzero series coefficient must equal the
    engine value, and each nonzero engine value inside the truncation box must
    appear in the series.  Returns counts and the list of mismatches.
    """
    from .. import engine
    from ..operators import OperatorConfig

    cfg = cfg or OperatorConfig(k)
    box_cfg = OperatorConfig(k, cfg.u_convention, cfg.cap_convention, trunc)
    ys = evolve(k, trunc, max_steps, z_sign)
    seen = {}
    mismatches = []
    for n, y in enumerate(ys):
        for (a, b), coeff in y.terms.items():
            for (e_u, d1, d2), value in coeff.terms.items():
                key = (e_u + 1, d1, d2, a, b)
                if d1 == 0 and d2 == 0:
                    continue
                want = engine.relative_invariant(k, e_u + 1, d1, d2, ones(d1), EMPTY, b, a,
                                                 box_cfg)
                n_rel = engine.n_points_relative(k, e_u + 1, d1, d2, ones(d1), EMPTY, b, a)
                if n_rel != n or want != value:
                    mismatches.append((n, key, value, want))
                seen[key] = value
    # reverse direction: engine values in the box that the series never produced
    checked = 0
    for d1 in range(trunc.max_q1 + 1):
        for d2 in range(trunc.max_q2 + 1):
            if (d1, d2) == (0, 0) or d1 - k * d2 < 0:
                continue
            e_size = d1 - k * d2
            for split in range(e_size + 1):
                for b in partitions_of(split):
                    for a in partitions_of(e_size - split):
                        for n in range(len(ys)):
                            g = n - engine.n_points_relative(k, 0, d1, d2, ones(d1), EMPTY, b, a)
                            want = engine.relative_invariant(k, g, d1, d2, ones(d1), EMPTY,
                                                             b, a, box_cfg)
                            checked += 1
                            if want and seen.get((g, d1, d2, a, b)) != want:
                                mismatches.append(("missing", (g, d1, d2, a, b), want))
    return {"coefficients": len(seen), "engine_checked": checked,
            "steps": len(ys) - 1, "mismatches": mismatches}
