"""Integer partitions and cohomology-weighted partitions."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterator, List, NamedTuple


class Partition(tuple):
    """A partition as a weakly decreasing tuple of positive integers.

    Construction sorts its input, so ``Partition([1, 2, 1]) == (2, 1, 1)``.
    """

    __slots__ = ()

    def __new__(cls, parts=()):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if parts and parts[-1] <= 0:
            raise ValueError(f"partition parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def multiplicity(self, j: int) -> int:
        return self.count(j)

    def multiplicities(self) -> Counter:
        return Counter(self)

    def union(self, other) -> "Partition":
        return Partition(tuple(self) + tuple(other))

    def contains(self, other) -> bool:
        mine = Counter(self)
        return all(mine[j] >= m for j, m in Counter(other).items())

    def remove(self, other) -> "Partition":
        """Multiset difference; raises if ``other`` is not contained."""
        left = Counter(self)
        for j, m in Counter(other).items():
            if left[j] < m:
                raise ValueError(f"{other} is not contained in {self}")
            left[j] -= m
        return Partition(left.elements())

    def __repr__(self) -> str:
        return f"Partition({format_partition(self) or '∅'})"

    def __str__(self) -> str:
        return format_partition(self)


EMPTY = Partition()


def parse_partition(text: str) -> Partition:
    """Parse ``"2+1+1"``; the empty string is the empty partition."""
    text = text.strip()
    if not text or text in ("0", "∅"):
        return EMPTY
    try:
        return Partition(int(p) for p in text.split("+"))
    except ValueError as exc:
        raise ValueError(f"bad partition syntax {text!r}") from exc


def format_partition(mu) -> str:
    return "+".join(str(p) for p in mu)


def ones(d: int) -> Partition:
    return Partition((1,) * d)


def aut_size(mu) -> int:
    return prod(factorial(m) for m in Counter(mu).values())


def zfactor(mu) -> int:
    """|Aut(mu)| times the product of the parts."""
    return prod(factorial(m) * j ** m for j, m in Counter(mu).items())


def sub_multisets(mu: Partition) -> Iterator[Partition]:
    """All sub-multisets of ``mu``, each once."""
    items = sorted(Counter(mu).items(), reverse=True)

    def rec(i):
        if i == len(items):
            yield ()
            return
        j, m = items[i]
        for rest in rec(i + 1):
            for c in range(m + 1):
                yield (j,) * c + rest

    for parts in rec(0):
        yield Partition(parts)


def binom_multiset(sigma, nu) -> int:
    """prod_j binom(m_j(sigma), m_j(nu)): ways to pick nu out of sigma."""
    cs = Counter(sigma)
    return prod(comb(cs[j], m) for j, m in Counter(nu).items())


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple:
    """Partitions of exactly ``n`` in lexicographically descending order."""
    if n < 0:
        return ()
    out: List[Partition] = []

    def rec(remaining, largest, prefix):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        for part in range(min(remaining, largest), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(n, n, ())
    return tuple(out)


def enumerate_partitions(max_size: int) -> List[Partition]:
    """All partitions of sizes 0..max_size, by size then lex descending."""
    return [mu for n in range(max_size + 1) for mu in partitions_of(n)]


class WeightedPartition(NamedTuple):
    """eta = rho[1] + lam[p]."""

    rho: Partition
    lam: Partition

    @property
    def size(self) -> int:
        return self.rho.size + self.lam.size

    @property
    def length(self) -> int:
        return len(self.rho) + len(self.lam)


def m_eta(eta: WeightedPartition) -> int:
    return prod(eta.rho) * prod(eta.lam)


def aut_eta(eta: WeightedPartition) -> int:
    return aut_size(eta.rho) * aut_size(eta.lam)


def dual(eta: WeightedPartition) -> WeightedPartition:
    return WeightedPartition(eta.lam, eta.rho)


def zfactor_ratio(mu, added) -> Fraction:
    """zfactor(mu + added) / zfactor(mu)."""
    return Fraction(zfactor(Partition(tuple(mu) + tuple(added))), zfactor(mu))
