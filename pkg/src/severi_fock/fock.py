"""The Fock space F[P^1] in the normalized basis |mu, nu>.

``mu`` carries the 1-weighted creations, ``nu`` the p-weighted ones, and

    |mu, nu> = alpha_{-mu}[1] alpha_{-nu}[p] v_0 / (z(mu) z(nu)).

In this basis every single annihilation has scalar 1: ``alpha_k[p]`` removes a
part ``k`` from ``mu`` and ``alpha_k[1]`` removes one from ``nu``.  Creation of
a part ``k`` on a side with ``m`` parts equal to ``k`` has scalar ``k (m + 1)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from typing import Callable, Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Tuple

from .coeffring import ONE, Coefficient, Truncation, accumulate, from_raw
from .partitions import (
    EMPTY,
    Partition,
    aut_size,
    format_partition,
    ones,
    parse_partition,
    zfactor,
)


class BasisState(NamedTuple):
    mu: Partition
    nu: Partition

    @property
    def size(self) -> int:
        return self.mu.size + self.nu.size

    def __str__(self) -> str:
        return f"mu={format_partition(self.mu)} ; nu={format_partition(self.nu)}"


def state(mu=(), nu=()) -> BasisState:
    return BasisState(Partition(mu), Partition(nu))


VACUUM = BasisState(EMPTY, EMPTY)

_STATE_RE = re.compile(r"^\s*mu\s*=\s*([0-9+]*)\s*;\s*nu\s*=\s*([0-9+]*)\s*$")


def parse_state(text: str) -> BasisState:
    """Parse ``"mu=2+1 ; nu=1"``."""
    m = _STATE_RE.match(text)
    if not m:
        raise ValueError(f"bad state syntax {text!r}")
    return BasisState(parse_partition(m.group(1)), parse_partition(m.group(2)))


def sort_key(s: BasisState):
    return (s.size, s.mu.size, tuple(s.mu), tuple(s.nu))


class FockVector:
    """Finite linear combination of basis states with Coefficient values."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[BasisState, Coefficient]] = None):
        clean = {}
        if terms:
            for s, c in terms.items():
                if not isinstance(c, Coefficient):
                    c = Coefficient.constant(c)
                if c:
                    clean[BasisState(Partition(s[0]), Partition(s[1]))] = c
        self._terms = clean

    @classmethod
    def _trusted(cls, terms: Dict[BasisState, Coefficient]) -> "FockVector":
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def basis(cls, s: BasisState, coeff: Coefficient = ONE) -> "FockVector":
        return cls({s: coeff})

    @property
    def terms(self) -> Mapping[BasisState, Coefficient]:
        return self._terms

    def items(self) -> Iterator[Tuple[BasisState, Coefficient]]:
        return iter(sorted(self._terms.items(), key=lambda kv: sort_key(kv[0])))

    def coefficient(self, s: BasisState) -> Coefficient:
        return self._terms.get(s, Coefficient.zero())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self) -> str:
        if not self._terms:
            return "FockVector(0)"
        inner = " + ".join(f"({c})|{s}>" for s, c in self.items())
        return f"FockVector({inner})"

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self._terms)
        for s, c in other._terms.items():
            total = out[s] + c if s in out else c
            if total:
                out[s] = total
            else:
                out.pop(s, None)
        return FockVector._trusted(out)

    def __neg__(self) -> "FockVector":
        return FockVector._trusted({s: -c for s, c in self._terms.items()})

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-other)

    def scale(self, factor, trunc: Optional[Truncation] = None) -> "FockVector":
        if isinstance(factor, Coefficient):
            out = {}
            for s, c in self._terms.items():
                acc: dict = {}
                accumulate(acc, c, factor, trunc)
                if acc:
                    out[s] = from_raw(acc)
            return FockVector._trusted(out)
        if not factor:
            return FockVector()
        return FockVector._trusted({s: c.scale(factor) for s, c in self._terms.items()})

    __rmul__ = scale

    def truncate(self, trunc: Optional[Truncation]) -> "FockVector":
        if trunc is None:
            return self
        out = {}
        for s, c in self._terms.items():
            c = c.truncate(trunc)
            if c:
                out[s] = c
        return FockVector._trusted(out)

    def max_size(self) -> int:
        return max((s.size for s in self._terms), default=0)


class _Accumulator:
    """Collects ``scalar * coeff`` contributions per basis state."""

    def __init__(self, trunc: Optional[Truncation] = None):
        self.trunc = trunc
        self.raw: Dict[BasisState, dict] = {}

    def add(self, s: BasisState, coeff: Coefficient, factor: Coefficient) -> None:
        accumulate(self.raw.setdefault(s, {}), coeff, factor, self.trunc)

    def add_scaled(self, s: BasisState, coeff: Coefficient, scalar: Fraction) -> None:
        if not scalar:
            return
        target = self.raw.setdefault(s, {})
        for key, v in coeff.terms.items():
            if self.trunc is not None and not self.trunc.keeps(key[1], key[2]):
                continue
            total = target.get(key, 0) + v * scalar
            if total:
                target[key] = total
            else:
                del target[key]

    def result(self) -> FockVector:
        return FockVector._trusted({s: from_raw(t) for s, t in self.raw.items() if t})


def map_states(x: FockVector, rule: Callable[[BasisState], Iterable[Tuple[BasisState, Fraction]]]
               ) -> FockVector:
    """Apply a linear map given on basis states by rational matrix entries."""
    acc = _Accumulator()
    for s, c in x.terms.items():
        for t, scalar in rule(s):
            acc.add_scaled(t, c, Fraction(scalar))
    return acc.result()


# ---- single ladder operators ------------------------------------------------

def _check_index(k: int) -> None:
    if k < 1:
        raise ValueError(f"ladder index must be positive, got {k}")


def create_one(k: int, x: FockVector) -> FockVector:
    """alpha_{-k}[1]."""
    _check_index(k)
    return map_states(x, lambda s: [(BasisState(s.mu.union((k,)), s.nu),
                                     k * (s.mu.multiplicity(k) + 1))])


def create_point(k: int, x: FockVector) -> FockVector:
    """alpha_{-k}[p]."""
    _check_index(k)
    return map_states(x, lambda s: [(BasisState(s.mu, s.nu.union((k,))),
                                     k * (s.nu.multiplicity(k) + 1))])


def annihilate_point(k: int, x: FockVector) -> FockVector:
    """alpha_k[p]: contracts against a 1-weighted part k."""
    _check_index(k)
    return map_states(x, lambda s: [(BasisState(s.mu.remove((k,)), s.nu), 1)]
                      if k in s.mu else [])


def annihilate_one(k: int, x: FockVector) -> FockVector:
    """alpha_k[1]: contracts against a p-weighted part k."""
    _check_index(k)
    return map_states(x, lambda s: [(BasisState(s.mu, s.nu.remove((k,))), 1)]
                      if k in s.nu else [])


def composite_creation_scalar(sigma: Partition, mu: Partition) -> int:
    """Scalar of alpha_{-mu}[1] taking |sigma, .> to |sigma + mu, .>."""
    scalar = 1
    for j in set(mu):
        m = mu.multiplicity(j)
        scalar *= j ** m * comb(sigma.multiplicity(j) + m, m)
    return scalar


def create_one_composite(mu, x: FockVector) -> FockVector:
    """alpha_{-mu}[1] = prod_i alpha_{-mu_i}[1] / |Aut(mu)|."""
    mu = Partition(mu)
    return map_states(x, lambda s: [(BasisState(s.mu.union(mu), s.nu),
                                     composite_creation_scalar(s.mu, mu))])


def annihilate_one_composite(nu, x: FockVector) -> FockVector:
    """alpha_nu[1] = prod_i alpha_{nu_i}[1] / |Aut(nu)|.

    Each single annihilation has scalar 1, so the composite scalar is
    ``1/|Aut(nu)|`` whenever ``nu`` is contained in the p-side.
    """
    nu = Partition(nu)
    inv_aut = Fraction(1, aut_size(nu))
    return map_states(x, lambda s: [(BasisState(s.mu, s.nu.remove(nu)), inv_aut)]
                      if s.nu.contains(nu) else [])


# ---- inner product ----------------------------------------------------------

def pairing_weight(s: BasisState) -> Coefficient:
    """<s | s'> for the unique partner s' = |s.nu, s.mu>."""
    return Coefficient.monomial(-(len(s.mu) + len(s.nu)), 0, 0,
                                Fraction(1, zfactor(s.mu) * zfactor(s.nu)))


def partner(s: BasisState) -> BasisState:
    return BasisState(s.nu, s.mu)


def inner_product(bra: FockVector, ket: FockVector,
                  trunc: Optional[Truncation] = None) -> Coefficient:
    """Bilinear pairing <mu,nu|mu',nu'> = u^-l(mu)/z(mu) u^-l(nu)/z(nu) [mu=nu'][nu=mu']."""
    acc: dict = {}
    if len(bra) > len(ket):
        bra, ket = ket, bra  # the pairing is symmetric
    for s, c in bra.terms.items():
        other = ket.terms.get(partner(s))
        if other is None:
            continue
        weight = pairing_weight(s)
        prod_c: dict = {}
        accumulate(prod_c, c, other, trunc)
        accumulate(acc, from_raw(prod_c), weight, trunc)
    return from_raw(acc)


def exp_alpha_minus_one(d_max: int) -> FockVector:
    """exp(alpha_{-1}[1]) v_0 up to d_max: sum_d |1^d, 0>."""
    return FockVector({BasisState(ones(d), EMPTY): ONE for d in range(d_max + 1)})


def basis_states(max_size: int):
    """All basis states with |mu| + |nu| <= max_size, deterministic order."""
    from .partitions import partitions_of

    out = []
    for total in range(max_size + 1):
        for a in range(total, -1, -1):
            for mu in partitions_of(a):
                for nu in partitions_of(total - a):
                    out.append(BasisState(mu, nu))
    return out
