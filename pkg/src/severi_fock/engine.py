"""Invariants as matrix elements of powers of M between boundary vectors.

Every pipeline has the same shape: start from a ket, apply M (or M-dagger) n
times, pair with a bra and read one coefficient.  Since ``exp(tM)`` carries
``t^n/n!`` and the generating function divides by the same ``n!``, the count
is the coefficient of ``u^(g-1) Q1^d1 Q2^d2`` in ``<bra| M^n |ket>``.

Sweeps ``x_0, x_1, ...`` are cached per (config, start vector), so every
invariant sharing a start vector reuses the same powers.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .caps import vector_v, vector_v_empty, vector_w
from .coeffring import Coefficient, Truncation
from .fock import BasisState, FockVector, inner_product
from .operators import OperatorConfig, apply_M, apply_M_adjoint, q1_weight
from .partitions import EMPTY, Partition, ones

ENGINE_VERSION = "1.0.0"


class TruncationError(ValueError):
    """The configured truncation cannot see the requested class."""


class IncompleteTableError(ValueError):
    pass


# ---- dimension counts -------------------------------------------------------

def n_points(k: int, g: int, d1: int, d2: int) -> int:
    return g - 1 + 2 * d1 + (2 - k) * d2


def n_points_p2(g: int, d: int) -> int:
    return 3 * d + g - 1


def _tangency_cost(mu_free, nu_fixed) -> int:
    # a free tangency of order m costs m-1 conditions, a fixed one costs m
    return sum(mu_free) - len(mu_free) + sum(nu_fixed)


def n_points_relative(k: int, g: int, d1: int, d2: int,
                      mu_c=(), nu_c=(), mu_e=(), nu_e=()) -> int:
    mu = tuple(mu_c) + tuple(mu_e)
    nu = tuple(nu_c) + tuple(nu_e)
    return n_points(k, g, d1, d2) - _tangency_cost(mu, nu)


def n_points_p2_relative(g: int, d: int, mu=(), nu=()) -> int:
    return n_points_p2(g, d) - _tangency_cost(tuple(mu), tuple(nu))


def arithmetic_genus(k: int, d1: int, d2: int) -> int:
    """p_a of the class d1 F + d2 E on F_k."""
    self_int = 2 * d1 * d2 - k * d2 * d2
    canonical = -2 * d1 + (k - 2) * d2
    return 1 + (self_int + canonical) // 2


def p2_arithmetic_genus(d: int) -> int:
    return (d - 1) * (d - 2) // 2


@lru_cache(maxsize=None)
def genus_bound(k: int, d1: int, d2: int) -> int:
    """Largest g for which a possibly disconnected invariant can be nonzero.

    Maximum over splittings of the class into nonzero effective pieces of
    sum(max(p_a, 0) - 1) + 1.
    """
    best = max(arithmetic_genus(k, d1, d2), 0)
    for a1 in range(d1 + 1):
        for a2 in range(d2 + 1):
            if (a1, a2) in ((0, 0), (d1, d2)):
                continue
            # one piece (a1, a2), the rest split recursively
            piece = max(arithmetic_genus(k, a1, a2), 0) - 1
            rest = genus_bound(k, d1 - a1, d2 - a2)
            best = max(best, piece + rest)
    return best


# ---- configuration and sweeps -----------------------------------------------

def default_config(k: int = 1) -> OperatorConfig:
    return OperatorConfig(k)


def _resolve(cfg: OperatorConfig, k: int, max_q1: int, max_q2: int) -> OperatorConfig:
    if cfg.k != k:
        cfg = OperatorConfig(k, cfg.u_convention, cfg.cap_convention, cfg.trunc)
    if cfg.trunc is None:
        return cfg.with_trunc(Truncation(max_q1, max_q2))
    if not cfg.trunc.covers(max_q1, max_q2):
        raise TruncationError(
            f"truncation Q1<={cfg.trunc.max_q1}, Q2<={cfg.trunc.max_q2} "
            f"does not cover Q1^{max_q1} Q2^{max_q2}")
    return cfg


class _SweepCache:
    """x_0, x_1, ... for one (cfg, start, direction), extended on demand."""

    def __init__(self):
        self._lock = threading.Lock()
        self._store: Dict[tuple, List[FockVector]] = {}

    def get(self, cfg: OperatorConfig, label: tuple, start: Callable[[], FockVector],
            n: int, adjoint: bool = False) -> FockVector:
        key = (cfg, label, adjoint)
        with self._lock:
            seq = self._store.get(key)
            if seq is None:
                seq = self._store[key] = [start()]
            step = apply_M_adjoint if adjoint else apply_M
            while len(seq) <= n:
                seq.append(step(cfg, seq[-1]))
            return seq[n]

    def clear(self) -> None:
        with self._lock:
            self._store.clear()


_SWEEPS = _SweepCache()


def clear_caches() -> None:
    _SWEEPS.clear()


def _w_label(k: int, cfg: OperatorConfig) -> tuple:
    return ("w", k, cfg.cap_convention)


def _pair(bra: FockVector, ket: FockVector, trunc: Truncation) -> Coefficient:
    return inner_product(bra, ket, trunc)


def _check_k(k: int) -> None:
    if not 0 <= k <= 3:
        raise ValueError(f"invariants need 0 <= k <= 3, got {k}")


def _check_class(d1: int, d2: int) -> None:
    if d1 < 0 or d2 < 0:
        raise ValueError("class degrees must be nonnegative")
    if d1 == 0 and d2 == 0:
        raise ValueError("the zero class has no invariant")


# ---- primary invariants -----------------------------------------------------

def gw_invariant(k: int, g: int, d1: int, d2: int,
                 cfg: Optional[OperatorConfig] = None) -> Fraction:
    """Possibly disconnected invariant of F_k in class d1 F + d2 E through n points."""
    _check_k(k)
    _check_class(d1, d2)
    cfg = _resolve(cfg or default_config(k), k, d1, d2)
    n = n_points(k, g, d1, d2)
    if n < 0:
        return Fraction(0)
    trunc = cfg.trunc
    ket = _SWEEPS.get(cfg, _w_label(k, cfg),
                      lambda: vector_w(k, trunc, cfg.cap_convention).vec, n)
    return _pair(vector_v(trunc).vec, ket, trunc).extract(g - 1, d1, d2)


def transverse_invariant(k: int, g: int, d1: int, d2: int,
                         cfg: Optional[OperatorConfig] = None) -> Fraction:
    """As :func:`gw_invariant` with the right cap w_0 for every k."""
    _check_k(k)
    _check_class(d1, d2)
    cfg = _resolve(cfg or default_config(k), k, d1, d2)
    n = n_points(k, g, d1, d2)
    if n < 0:
        return Fraction(0)
    trunc = cfg.trunc
    ket = _SWEEPS.get(cfg, _w_label(0, cfg),
                      lambda: vector_w(0, trunc, cfg.cap_convention).vec, n)
    return _pair(vector_v(trunc).vec, ket, trunc).extract(g - 1, d1, d2)


def p2_severi(g: int, d: int, cfg: Optional[OperatorConfig] = None) -> Fraction:
    """Possibly disconnected Severi degree of P^2 (Q = Q1 Q2)."""
    if d < 1:
        raise ValueError("degree must be positive")
    cfg = _resolve(cfg or default_config(1), 1, d, d)
    n = n_points_p2(g, d)
    if n < 0:
        return Fraction(0)
    trunc = cfg.trunc
    ket = _SWEEPS.get(cfg, ("v_empty",), lambda: vector_v_empty().vec, n)
    return _pair(vector_v(trunc).vec, ket, trunc).extract(g - 1, d, d)


def relative_invariant(k: int, g: int, d1: int, d2: int,
                       mu_c=(), nu_c=(), mu_e=(), nu_e=(),
                       cfg: Optional[OperatorConfig] = None) -> Fraction:
    """Relative invariant with tangency data along C (bra) and E (ket).

    ``mu`` partitions are free tangencies, ``nu`` fixed ones.  Returns 0 when
    the boundary sizes do not match the intersection numbers with C and E.
    """
    _check_k(k)
    _check_class(d1, d2)
    mu_c, nu_c, mu_e, nu_e = (Partition(p) for p in (mu_c, nu_c, mu_e, nu_e))
    cfg = _resolve(cfg or default_config(k), k, d1, d2)
    if mu_c.size + nu_c.size != d1 or mu_e.size + nu_e.size != d1 - k * d2:
        return Fraction(0)
    n = n_points_relative(k, g, d1, d2, mu_c, nu_c, mu_e, nu_e)
    if n < 0:
        return Fraction(0)
    trunc = cfg.trunc
    ket_state = BasisState(mu_e, nu_e)
    weight = Coefficient.monomial(0, ket_state.size, 0)
    ket = _SWEEPS.get(cfg, ("rel", ket_state),
                      lambda: FockVector.basis(ket_state, weight).truncate(trunc), n)
    bra = FockVector.basis(BasisState(mu_c, nu_c))
    return _pair(bra, ket, trunc).extract(g - 1, d1, d2)


def p2_relative(g: int, d: int, mu=(), nu=(), cfg: Optional[OperatorConfig] = None) -> Fraction:
    """P^2 invariant with tangency data (free ``mu``, fixed ``nu``) along a line."""
    if d < 1:
        raise ValueError("degree must be positive")
    mu, nu = Partition(mu), Partition(nu)
    cfg = _resolve(cfg or default_config(1), 1, d, d)
    if mu.size + nu.size != d:
        return Fraction(0)
    n = n_points_p2_relative(g, d, mu, nu)
    if n < 0:
        return Fraction(0)
    trunc = cfg.trunc
    ket = _SWEEPS.get(cfg, ("v_empty",), lambda: vector_v_empty().vec, n)
    bra = FockVector.basis(BasisState(mu, nu))
    return _pair(bra, ket, trunc).extract(g - 1, d, d)


# ---- adjoint pipelines ------------------------------------------------------

def gw_invariant_adjoint(k: int, g: int, d1: int, d2: int,
                         cfg: Optional[OperatorConfig] = None) -> Fraction:
    """<w_k| (M^dagger)^n |v>: the same number by the transposed pipeline."""
    _check_k(k)
    _check_class(d1, d2)
    cfg = _resolve(cfg or default_config(k), k, d1, d2)
    n = n_points(k, g, d1, d2)
    if n < 0:
        return Fraction(0)
    trunc = cfg.trunc
    ket = _SWEEPS.get(cfg, ("v",), lambda: vector_v(trunc).vec, n, adjoint=True)
    return _pair(vector_w(k, trunc, cfg.cap_convention).vec, ket, trunc).extract(g - 1, d1, d2)


def p2_severi_adjoint(g: int, d: int, cfg: Optional[OperatorConfig] = None) -> Fraction:
    if d < 1:
        raise ValueError("degree must be positive")
    cfg = _resolve(cfg or default_config(1), 1, d, d)
    n = n_points_p2(g, d)
    if n < 0:
        return Fraction(0)
    trunc = cfg.trunc
    ket = _SWEEPS.get(cfg, ("v",), lambda: vector_v(trunc).vec, n, adjoint=True)
    return _pair(vector_v_empty().vec, ket, trunc).extract(g - 1, d, d)


class AdjointCase(NamedTuple):
    kind: str
    k: int
    g: int
    d1: int
    d2: int
    forward: Fraction
    adjoint: Fraction


def adjoint_form_check(inputs: Iterable[tuple], cfg: Optional[OperatorConfig] = None
                       ) -> List[AdjointCase]:
    """Compare forward and adjoint pipelines.

    Inputs are ``("p2", g, d)`` or ``("gw", k, g, d1, d2)`` tuples.
    """
    out = []
    for item in inputs:
        if item[0] == "p2":
            _, g, d = item
            base = cfg or default_config(1)
            out.append(AdjointCase("p2", 1, g, d, d, p2_severi(g, d, base),
                                   p2_severi_adjoint(g, d, base)))
        elif item[0] == "gw":
            _, k, g, d1, d2 = item
            base = cfg or default_config(k)
            out.append(AdjointCase("gw", k, g, d1, d2, gw_invariant(k, g, d1, d2, base),
                                   gw_invariant_adjoint(k, g, d1, d2, base)))
        else:
            raise ValueError(f"unknown adjoint case {item!r}")
    return out


# ---- identities -------------------------------------------------------------

class IdentityResult(NamedTuple):
    lhs: Fraction
    rhs: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def ab_check(g: int, d1: int, d2: int, cfg: Optional[OperatorConfig] = None) -> IdentityResult:
    """F_2 invariant against the binomially weighted transverse counts."""
    d = d1 - 2 * d2
    if d < 0:
        raise ValueError("need d1 - 2 d2 >= 0")
    base = cfg or default_config(2)
    lhs = gw_invariant(2, g, d1, d2, base)
    rhs = Fraction(0)
    for i in range(d2 + 1):
        if (d1, d2 - i) == (0, 0):
            continue
        rhs += comb(d + 2 * i, i) * transverse_invariant(2, g, d1, d2 - i, base)
    return IdentityResult(lhs, rhs)


def _shifted(k: int, g: int, d1: int, d2: int, cfg) -> Fraction:
    if d1 < 0 or d2 < 0:
        return Fraction(0)
    return gw_invariant(k, g, d1, d2, cfg)


class DeformationResult(NamedTuple):
    even: IdentityResult  # F_2 (d1,d2) vs F_0 (d1 - d2, d2)
    odd: IdentityResult   # F_3 (d1,d2) vs F_1 (d1 - d2, d2)


def deformation_check(g: int, d1: int, d2: int, cfg: Optional[OperatorConfig] = None,
                      shift: int = -1) -> DeformationResult:
    """Compare F_{k+2} in class (d1, d2) with F_k in class (d1 + shift*d2, d2).

    ``shift=-1`` preserves the point count; ``shift=+1`` is kept for comparison.
    """
    def with_k(k):
        if cfg is None:
            return default_config(k)
        return OperatorConfig(k, cfg.u_convention, cfg.cap_convention, cfg.trunc)

    e1 = d1 + shift * d2
    even = IdentityResult(gw_invariant(2, g, d1, d2, with_k(2)), _shifted(0, g, e1, d2, with_k(0)))
    odd = IdentityResult(gw_invariant(3, g, d1, d2, with_k(3)), _shifted(1, g, e1, d2, with_k(1)))
    return DeformationResult(even, odd)


class BGResult(NamedTuple):
    literal: Fraction     # coefficient at Q1^d1 after the Q1-weight
    reindexed: Fraction   # coefficient at Q1^(2 d1)
    transverse: Fraction


def blockgoettsche_Z(k: int, g: int, d1: int, d2: int,
                     cfg: Optional[OperatorConfig] = None) -> BGResult:
    """Transverse pipeline with the Q1^(|mu|+|nu|) weight inserted at the bra."""
    _check_k(k)
    _check_class(d1, d2)
    transverse = transverse_invariant(k, g, d1, d2, cfg)
    base = cfg or default_config(k)
    if base.trunc is not None:
        base = base.with_trunc(None)
    wide = _resolve(base, k, 2 * d1, d2)
    n = n_points(k, g, d1, d2)
    if n < 0:
        return BGResult(Fraction(0), Fraction(0), transverse)
    trunc = wide.trunc
    ket = _SWEEPS.get(wide, _w_label(0, wide),
                      lambda: vector_w(0, trunc, wide.cap_convention).vec, n)
    paired = _pair(vector_v(trunc).vec, q1_weight(ket, trunc), trunc)
    return BGResult(paired.extract(g - 1, d1, d2), paired.extract(g - 1, 2 * d1, d2), transverse)


# ---- tables and connected counts -------------------------------------------

class InvariantRecord(NamedTuple):
    kind: str
    k: int
    d1: int
    d2: int
    g: int
    n: int
    value: Fraction
    convention: str
    relative: Optional[Tuple[Partition, Partition, Partition, Partition]] = None

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "k": self.k, "d1": self.d1, "d2": self.d2,
               "g": self.g, "n": self.n, "value": str(self.value),
               "convention": self.convention}
        if self.relative is not None:
            out.update({name: "+".join(map(str, p)) for name, p in
                        zip(("muC", "nuC", "muE", "nuE"), self.relative)})
        return out


def p2_table(d_max: int, cfg: Optional[OperatorConfig] = None) -> List[InvariantRecord]:
    """Disconnected P^2 counts for 1 <= d <= d_max and every g with n >= 0 up to the bound."""
    if d_max < 1:
        return []
    cfg = _resolve((cfg or default_config(1)).with_trunc(None), 1, d_max, d_max)
    trunc = cfg.trunc
    bra = vector_v(trunc).vec
    top_n = max(n_points_p2(p2_arithmetic_genus(d), d) for d in range(1, d_max + 1))
    rows = []
    for n in range(top_n + 1):
        ket = _SWEEPS.get(cfg, ("v_empty",), lambda: vector_v_empty().vec, n)
        paired = _pair(bra, ket, trunc)
        for d in range(1, d_max + 1):
            g = n - 3 * d + 1
            if g > p2_arithmetic_genus(d):
                continue
            rows.append(InvariantRecord("p2", 1, d, d, g, n, paired.extract(g - 1, d, d),
                                        cfg.fingerprint))
    rows.sort(key=lambda r: (r.d1, r.g))
    return rows


def fk_table(k: int, d1_max: int, d2_max: int, cfg: Optional[OperatorConfig] = None,
             kind: str = "gw") -> List[InvariantRecord]:
    """Disconnected (or transverse) F_k counts on a class box, all g with n >= 0."""
    _check_k(k)
    if kind not in ("gw", "transverse"):
        raise ValueError(f"unknown table kind {kind!r}")
    classes = [(a, b) for a in range(d1_max + 1) for b in range(d2_max + 1) if (a, b) != (0, 0)]
    if not classes:
        return []
    cfg = _resolve((cfg or default_config(k)).with_trunc(None), k, d1_max, d2_max)
    trunc = cfg.trunc
    cap_k = k if kind == "gw" else 0
    bra = vector_v(trunc).vec
    top_n = max(n_points(k, genus_bound(k, a, b), a, b) for a, b in classes)
    rows = []
    for n in range(top_n + 1):
        ket = _SWEEPS.get(cfg, _w_label(cap_k, cfg),
                          lambda: vector_w(cap_k, trunc, cfg.cap_convention).vec, n)
        paired = _pair(bra, ket, trunc)
        for a, b in classes:
            g = n + 1 - 2 * a - (2 - k) * b
            if g > genus_bound(k, a, b):
                continue
            rows.append(InvariantRecord(kind, k, a, b, g, n, paired.extract(g - 1, a, b),
                                        cfg.fingerprint))
    rows.sort(key=lambda r: (r.d1, r.d2, r.g))
    return rows


def _series_mul(a: Dict[tuple, Fraction], b: Dict[tuple, Fraction]) -> Dict[tuple, Fraction]:
    out: Dict[tuple, Fraction] = {}
    for (ea, na), va in a.items():
        for (eb, nb), vb in b.items():
            key = (ea + eb, na + nb)
            out[key] = out.get(key, 0) + va * vb
    return {key: v for key, v in out.items() if v}


def connected_from_disconnected(table: Sequence[InvariantRecord],
                                genus_cap: Optional[Callable[[int, int], int]] = None
                                ) -> List[InvariantRecord]:
    """Formal logarithm of the generating function in the class variables.

    Each class carries a series in u (exponent g-1) and t (t^n/n!).  Records
    missing from the table are taken as zero only when ``genus_cap`` says the
    genus is above the vanishing bound; otherwise an error is raised.
    """
    if not table:
        return []
    series: Dict[Tuple[int, int], Dict[tuple, Fraction]] = {}
    present: Dict[Tuple[int, int], set] = {}
    for r in table:
        beta = (r.d1, r.d2)
        present.setdefault(beta, set()).add(r.n)
        if r.value:
            series.setdefault(beta, {})[(r.g - 1, r.n)] = Fraction(r.value) / factorial(r.n)
    kind, k, convention = table[0].kind, table[0].k, table[0].convention
    p2 = kind == "p2"

    def degree(beta):
        return beta[0] if p2 else beta[0] + beta[1]

    def n_of(beta, g):
        return n_points_p2(g, beta[0]) if p2 else n_points(k, g, *beta)

    def cap(beta):
        if genus_cap is not None:
            return genus_cap(*beta)
        return p2_arithmetic_genus(beta[0]) if p2 else genus_bound(k, *beta)

    def below(beta):
        for other in present:
            if other != beta and all(o <= b for o, b in zip(other, beta)) and \
                    (not p2 or other[0] == other[1]):
                yield other

    def check_complete(beta, n_max):
        for other in list(below(beta)) + [beta]:
            for n in range(n_max + 1):
                if n in present.get(other, ()):
                    continue
                g = n - n_of(other, 0)
                if g > cap(other):
                    continue
                raise IncompleteTableError(f"missing class {other} at n={n}")
        if p2:
            return
        for a in range(beta[0] + 1):
            for b in range(beta[1] + 1):
                if (a, b) not in ((0, 0),) and (a, b) not in present:
                    raise IncompleteTableError(f"missing class {(a, b)}")

    connected: Dict[Tuple[int, int], Dict[tuple, Fraction]] = {}
    classes = sorted(present, key=lambda b: (degree(b), b))
    for beta in classes:
        n_max = max(present[beta])
        check_complete(beta, n_max)
        acc = dict(series.get(beta, {}))
        for other in below(beta):
            rest = (beta[0] - other[0], beta[1] - other[1])
            prod = _series_mul(connected.get(other, {}), series.get(rest, {}))
            w = Fraction(degree(other), degree(beta))
            for key, v in prod.items():
                acc[key] = acc.get(key, 0) - w * v
        connected[beta] = {key: v for key, v in acc.items() if v}

    out = []
    for r in table:
        beta = (r.d1, r.d2)
        c = connected[beta].get((r.g - 1, r.n), Fraction(0)) * factorial(r.n)
        out.append(r._replace(kind=r.kind + "_connected", value=c))
    return out
