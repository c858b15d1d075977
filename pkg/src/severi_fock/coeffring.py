"""Exact coefficients: sparse Laurent polynomials in u, polynomial in Q1, Q2.

Values are :class:`fractions.Fraction`.  A :class:`Coefficient` maps exponent
triples ``(e_u, e_q1, e_q2)`` to nonzero rationals and is never mutated after
construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

Rational = Fraction
Exponent = Tuple[int, int, int]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    # str(Fraction) drops a unit denominator: "3", "-1/4"
    return str(value)


@dataclass(frozen=True)
class Truncation:
    max_q1: int
    max_q2: int

    def __post_init__(self):
        if self.max_q1 < 0 or self.max_q2 < 0:
            raise ValueError("truncation bounds must be nonnegative")

    def keeps(self, e_q1: int, e_q2: int) -> bool:
        return e_q1 <= self.max_q1 and e_q2 <= self.max_q2

    def covers(self, d1: int, d2: int) -> bool:
        return d1 <= self.max_q1 and d2 <= self.max_q2


class Coefficient:
    """Element of Q[u, u^-1][Q1, Q2] stored sparsely.

    >>> c = Coefficient.monomial(-1, 0, 1) + Coefficient.monomial(0, 1, 0, 3)
    >>> c.extract(-1, 0, 1)
    Fraction(1, 1)
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Exponent, object]] = None):
        clean: Dict[Exponent, Fraction] = {}
        if terms:
            for key, value in terms.items():
                value = as_rational(value)
                if value:
                    e_u, e_q1, e_q2 = key
                    if e_q1 < 0 or e_q2 < 0:
                        raise ValueError(f"negative Q exponent in {key}")
                    clean[(int(e_u), int(e_q1), int(e_q2))] = value
        self._terms = clean
        self._hash = None

    @classmethod
    def _trusted(cls, terms: Dict[Exponent, Fraction]) -> "Coefficient":
        # caller guarantees: no zeros, valid keys
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, e_u: int = 0, e_q1: int = 0, e_q2: int = 0, value=1) -> "Coefficient":
        return cls({(e_u, e_q1, e_q2): value})

    @classmethod
    def constant(cls, value=1) -> "Coefficient":
        return cls({(0, 0, 0): value})

    @classmethod
    def zero(cls) -> "Coefficient":
        return cls._trusted({})

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return self._terms

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(sorted(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Coefficient):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Coefficient.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "Coefficient(0)"
        return f"Coefficient({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (e_u, e_q1, e_q2), value in self.items():
            factors = []
            for name, exp in (("u", e_u), ("Q1", e_q1), ("Q2", e_q2)):
                if exp == 1:
                    factors.append(name)
                elif exp:
                    factors.append(f"{name}^{exp}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(value))
            elif value == 1:
                parts.append(mono)
            elif value == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{value}*{mono}")
        return " + ".join(parts)

    def __neg__(self) -> "Coefficient":
        return Coefficient._trusted({k: -v for k, v in self._terms.items()})

    def __add__(self, other) -> "Coefficient":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> "Coefficient":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other) -> "Coefficient":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(other, -self)

    def __mul__(self, other) -> "Coefficient":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Coefficient):
            return mul(self, other)
        return NotImplemented

    def __rmul__(self, other) -> "Coefficient":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, factor) -> "Coefficient":
        factor = as_rational(factor)
        if not factor:
            return Coefficient.zero()
        return Coefficient._trusted({k: v * factor for k, v in self._terms.items()})

    def shift(self, e_u: int = 0, e_q1: int = 0, e_q2: int = 0,
              trunc: Optional[Truncation] = None) -> "Coefficient":
        """Multiply by the monomial u^e_u Q1^e_q1 Q2^e_q2."""
        out = {}
        for (a, b, c), v in self._terms.items():
            key = (a + e_u, b + e_q1, c + e_q2)
            if trunc is not None and not trunc.keeps(key[1], key[2]):
                continue
            out[key] = v
        return Coefficient._trusted(out)

    def truncate(self, trunc: Optional[Truncation]) -> "Coefficient":
        if trunc is None:
            return self
        return Coefficient._trusted(
            {k: v for k, v in self._terms.items() if trunc.keeps(k[1], k[2])})

    def extract(self, e_u: int, e_q1: int, e_q2: int) -> Fraction:
        return extract(self, e_u, e_q1, e_q2)

    def substitute_q2_zero(self) -> "Coefficient":
        return Coefficient._trusted({k: v for k, v in self._terms.items() if k[2] == 0})

    def to_records(self) -> list:
        return [{"eu": k[0], "eq1": k[1], "eq2": k[2], "value": format_rational(v)}
                for k, v in self.items()]

    def dumps(self) -> str:
        return json.dumps(self.to_records(), separators=(",", ":"))

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "Coefficient":
        out: Dict[Exponent, Fraction] = {}
        for rec in records:
            key = (int(rec["eu"]), int(rec["eq1"]), int(rec["eq2"]))
            if key in out:
                raise ValueError(f"duplicate exponent {key}")
            out[key] = Fraction(rec["value"])
        return cls(out)

    @classmethod
    def loads(cls, text: str) -> "Coefficient":
        return cls.from_records(json.loads(text))


def _coerce(value):
    if isinstance(value, Coefficient):
        return value
    if isinstance(value, (int, Fraction)):
        return Coefficient.constant(value)
    return NotImplemented


def add(a: Coefficient, b: Coefficient) -> Coefficient:
    if not b._terms:
        return a
    if not a._terms:
        return b
    out = dict(a._terms)
    for k, v in b._terms.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return Coefficient._trusted(out)


def mul(a: Coefficient, b: Coefficient, trunc: Optional[Truncation] = None) -> Coefficient:
    """Exact product; with ``trunc`` monomials beyond the bounds are dropped."""
    out: Dict[Exponent, Fraction] = {}
    for (a_u, a_1, a_2), av in a._terms.items():
        for (b_u, b_1, b_2), bv in b._terms.items():
            q1 = a_1 + b_1
            q2 = a_2 + b_2
            if trunc is not None and (q1 > trunc.max_q1 or q2 > trunc.max_q2):
                continue
            key = (a_u + b_u, q1, q2)
            s = out.get(key, 0) + av * bv
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return Coefficient._trusted(out)


def extract(a: Coefficient, e_u: int, e_q1: int, e_q2: int) -> Fraction:
    return a._terms.get((e_u, e_q1, e_q2), Fraction(0))


def accumulate(target: Dict[Exponent, Fraction], c: Coefficient, factor: Coefficient,
               trunc: Optional[Truncation] = None) -> None:
    """In-place ``target += c * factor`` on raw term dicts (hot loop helper)."""
    for (a_u, a_1, a_2), av in c._terms.items():
        for (b_u, b_1, b_2), bv in factor._terms.items():
            q1 = a_1 + b_1
            q2 = a_2 + b_2
            if trunc is not None and (q1 > trunc.max_q1 or q2 > trunc.max_q2):
                continue
            key = (a_u + b_u, q1, q2)
            s = target.get(key, 0) + av * bv
            if s:
                target[key] = s
            else:
                del target[key]


def from_raw(terms: Dict[Exponent, Fraction]) -> Coefficient:
    """Wrap a dict built by :func:`accumulate` (zeros already pruned)."""
    return Coefficient._trusted(terms)


ONE = Coefficient.constant(1)
ZERO = Coefficient.zero()
