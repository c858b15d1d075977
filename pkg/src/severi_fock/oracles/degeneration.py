"""Brute-force degeneration sum for small point counts.

The surface is degenerated into a chain: an end cap ``S_0`` (carrying the
``w_k`` data, or nothing in P^2 mode), ``n`` tubes each holding one point, and
an end cap ``S_{n+1}`` of fibers.  Gluing conditions ``eta_0 .. eta_n`` are
multisets of labels ``("1", m)`` (fixed) and ``("p", m)`` (free).

Each tube holds exactly one marked component, the rest being unmarked cylinders
``(c, m) -> (c, m)`` of weight ``1/m``.  The marked component is either

* type A: ``("1", m) -> ("p", m)``, weight 1;
* type B: a multiset of ``p``-labels on the left, ``1``-labels on the right
  of total size ``k`` larger, weight 1, one unit of Q2.

Each gluing condition contributes ``m(eta)/|Aut(eta)|`` and each node adds one
to the genus: ``g - 1 = sum over components (h - 1) + sum_i l(eta_i)``.
Labelled attachments are counted on a fixed ordering of the parts of every
``eta_i``.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import factorial, prod
from typing import Dict, Iterator, List, Tuple

from ..caps import CapComponent, cap_table
from ..engine import n_points, n_points_p2
from ..partitions import Partition, aut_size, partitions_of, sub_multisets

Label = Tuple[str, int]
Eta = Tuple[Label, ...]

MAX_POINTS = 3

# accumulated data: (eta, q1, q2, genus_sum) -> weight
State = Tuple[Eta, int, int, int]


def _eta(labels) -> Eta:
    return tuple(sorted(labels))


def _gluing_factor(eta: Eta) -> Fraction:
    m = prod(size for _, size in eta)
    return Fraction(m, prod(factorial(c) for c in Counter(eta).values()))


def _integral(comp: CapComponent) -> Fraction:
    # exponent coefficient of a raw creation product -> moduli integral
    parts = comp.free + comp.fixed
    return comp.coeff * prod(parts) * aut_size(comp.free) * aut_size(comp.fixed)


def _component_multisets(table: List[CapComponent], q1: int, q2: int
                         ) -> Iterator[Tuple[Tuple[int, ...], int, int]]:
    """Multisets of cap components (as count vectors) within the Q budget."""
    def rec(i, left1, left2, counts):
        if i == len(table):
            yield tuple(counts), q1 - left1, q2 - left2
            return
        comp = table[i]
        c = 0
        while True:
            yield from rec(i + 1, left1 - c * comp.s, left2 - c * comp.t, counts + [c])
            c += 1
            if comp.s * c > left1 or comp.t * c > left2:
                break
            if comp.s == 0 and comp.t == 0:
                break

    yield from rec(0, q1, q2, [])


def _start_states(k: int, d1: int, d2: int, convention: str) -> Dict[State, Fraction]:
    table = cap_table(k, convention, d1)
    out: Dict[State, Fraction] = {}
    for counts, s_tot, t_tot in _component_multisets(table, d1, d2):
        labels: List[Label] = []
        weight = Fraction(1)
        genus = 0
        block_auts = 1
        for comp, c in zip(table, counts):
            if not c:
                continue
            labels += ([("p", m) for m in comp.free] + [("1", m) for m in comp.fixed]) * c
            weight *= _integral(comp) ** c
            genus += (comp.h - 1) * c
            inner = Counter([("p", m) for m in comp.free] + [("1", m) for m in comp.fixed])
            block_auts *= factorial(c) * prod(factorial(v) for v in inner.values()) ** c
        eta = _eta(labels)
        # labelled set partitions of eta into the chosen blocks
        ways = Fraction(prod(factorial(v) for v in Counter(eta).values()), block_auts)
        key = (eta, s_tot, t_tot, genus)
        out[key] = out.get(key, 0) + weight * ways
    return out


def _sub_labels(eta: Eta, cls: str) -> Iterator[Tuple[Partition, int]]:
    """Sub-multisets of the ``cls`` parts with the number of labelled choices."""
    parts = Partition(m for c, m in eta if c == cls)
    for sub in sub_multisets(parts):
        ways = prod(_choose(parts.multiplicity(j), sub.multiplicity(j)) for j in set(sub))
        yield sub, ways


def _choose(n: int, r: int) -> int:
    return factorial(n) // (factorial(r) * factorial(n - r))


def _remove(eta: Eta, labels) -> Eta:
    left = Counter(eta)
    left.subtract(labels)
    return _eta(left.elements())


def _covers(rest: Eta) -> Tuple[Fraction, int]:
    """Unmarked cylinders on the unused parts: bijection count times 1/m each."""
    weight = Fraction(prod(factorial(v) for v in Counter(rest).values()))
    for _, m in rest:
        weight /= m
    return weight, -len(rest)


def _tube(k: int, eta: Eta) -> Iterator[Tuple[Eta, int, int, Fraction]]:
    """(next eta, Q2 increment, genus increment, labelled weight) for one tube."""
    # type A
    for m in sorted({m for c, m in eta if c == "1"}):
        ways_left = sum(1 for c, mm in eta if (c, mm) == ("1", m))
        rest = _remove(eta, [("1", m)])
        nxt = _eta(rest + (("p", m),))
        ways_right = sum(1 for lab in nxt if lab == ("p", m))
        cover_w, cover_g = _covers(rest)
        yield nxt, 0, cover_g - 1, ways_left * ways_right * cover_w
    # type B
    for tau, ways_left in _sub_labels(eta, "p"):
        rest = _remove(eta, [("p", m) for m in tau])
        for tau2 in partitions_of(tau.size + k):
            nxt = _eta(rest + tuple(("1", m) for m in tau2))
            counts = Counter(nxt)
            ways_right = prod(_choose(counts[("1", j)], tau2.multiplicity(j)) for j in set(tau2))
            cover_w, cover_g = _covers(rest)
            yield nxt, 1, cover_g - 1, ways_left * ways_right * cover_w


def _run(start: Dict[State, Fraction], k: int, n: int, g: int, d1: int, d2: int) -> Fraction:
    layer = {key: w * _gluing_factor(key[0]) for key, w in start.items()}
    # carry the node count inside the genus slot: genus_sum + sum l(eta_i)
    layer = {(eta, q1, q2, gs + len(eta)): w for (eta, q1, q2, gs), w in layer.items()}
    for _ in range(n):
        nxt: Dict[State, Fraction] = {}
        for (eta, q1, q2, gs), w in layer.items():
            for eta2, dq2, dg, tw in _tube(k, eta):
                if q2 + dq2 > d2 or sum(m for _, m in eta2) > d1:
                    continue
                key = (eta2, q1, q2 + dq2, gs + dg + len(eta2))
                nxt[key] = nxt.get(key, 0) + w * tw * _gluing_factor(eta2)
        layer = nxt
    total = Fraction(0)
    for (eta, q1, q2, gs), w in layer.items():
        if q2 != d2 or any(c != "p" or m != 1 for c, m in eta) or len(eta) != d1:
            continue
        # end cap: one fiber per free simple point
        if gs - len(eta) == g - 1:
            total += w
    return total


def degeneration_sum(k: int, g: int, d1: int, d2: int, convention: str = "corrected") -> Fraction:
    n = n_points(k, g, d1, d2)
    if n < 0:
        return Fraction(0)
    if n > MAX_POINTS:
        raise ValueError(f"degeneration sum limited to n <= {MAX_POINTS}, got {n}")
    return _run(_start_states(k, d1, d2, convention), k, n, g, d1, d2)


def degeneration_sum_p2(g: int, d: int) -> Fraction:
    n = n_points_p2(g, d)
    if n < 0:
        return Fraction(0)
    if n > MAX_POINTS:
        raise ValueError(f"degeneration sum limited to n <= {MAX_POINTS}, got {n}")
    return _run({((), 0, 0, 0): Fraction(1)}, 1, n, g, d, d)
