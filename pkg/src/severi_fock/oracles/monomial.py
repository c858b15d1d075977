"""Unnormalized monomial model of the Fock space.

A state is a multiset of creation labels ``(cls, k)`` with ``cls`` in
``{"1", "p"}``; creations commute and nothing is divided out.  Annihilators
act through the bracket ``[alpha_k[a], alpha_{-l}[b]] = k delta_{kl} <a, b>``
where ``<1, p> = 1`` and the other pairings vanish.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

from ..fock import (
    BasisState,
    FockVector,
    annihilate_one,
    annihilate_point,
    basis_states,
    create_one,
    create_point,
)
from ..partitions import Partition, zfactor

Label = Tuple[str, int]
MonomialState = Tuple[Label, ...]
Combo = Dict[MonomialState, Fraction]

_DUAL = {"1": "p", "p": "1"}


def monomial_state(labels: Iterable[Label]) -> MonomialState:
    return tuple(sorted(labels))


def monomial_apply(op: Tuple[str, str, int], s: MonomialState) -> Combo:
    """Apply a ladder generator to a monomial state.

    ``op = ("create", cls, k)`` appends ``(cls, k)``; ``("annihilate", cls, k)``
    contracts against every ``(dual(cls), k)`` label with scalar ``k``.
    """
    kind, cls, k = op
    if kind == "create":
        return {monomial_state(s + ((cls, k),)): Fraction(1)}
    if kind != "annihilate":
        raise ValueError(f"unknown ladder kind {kind!r}")
    target = (_DUAL[cls], k)
    count = s.count(target)
    if not count:
        return {}
    rest = list(s)
    rest.remove(target)
    return {monomial_state(rest): Fraction(k * count)}


def apply_to_combo(op, combo: Combo) -> Combo:
    out: Combo = {}
    for s, c in combo.items():
        for t, v in monomial_apply(op, s).items():
            out[t] = out.get(t, 0) + c * v
    return {s: v for s, v in out.items() if v}


def to_monomial(s: BasisState) -> Combo:
    """|mu, nu> as a monomial combination: labels over z(mu) z(nu)."""
    labels = [("1", j) for j in s.mu] + [("p", j) for j in s.nu]
    return {monomial_state(labels): Fraction(1, zfactor(s.mu) * zfactor(s.nu))}


def from_monomial(combo: Combo) -> Dict[BasisState, Fraction]:
    out = {}
    for labels, c in combo.items():
        mu = Partition(j for cls, j in labels if cls == "1")
        nu = Partition(j for cls, j in labels if cls == "p")
        out[BasisState(mu, nu)] = c * zfactor(mu) * zfactor(nu)
    return out


_FOCK_OPS = {
    ("create", "1"): create_one,
    ("create", "p"): create_point,
    ("annihilate", "p"): annihilate_point,
    ("annihilate", "1"): annihilate_one,
}


def _fock_scalars(op, s: BasisState) -> Dict[BasisState, Fraction]:
    kind, cls, k = op
    vec = _FOCK_OPS[(kind, cls)](k, FockVector.basis(s))
    return {t: c.extract(0, 0, 0) for t, c in vec.terms.items()}


def normalized_vs_monomial_check(max_size: int) -> List[tuple]:
    """Compare every ladder generator on every basis state of size <= max_size.

    Returns the list of mismatches (empty when the two models agree).
    """
    bad = []
    for s in basis_states(max_size):
        for k in range(1, max_size + 1):
            for kind in ("create", "annihilate"):
                for cls in ("1", "p"):
                    op = (kind, cls, k)
                    want = from_monomial(apply_to_combo(op, to_monomial(s)))
                    got = _fock_scalars(op, s)
                    if want != got:
                        bad.append((op, s, want, got))
    return bad


def commutator_check(max_size: int) -> List[tuple]:
    """[alpha_k[a], alpha_{-l}[b]] = k delta_{kl} <a,b> on the normalized basis."""
    bad = []
    pair = {("p", "1"): 1, ("1", "p"): 1}
    creators = {"1": create_one, "p": create_point}
    annihilators = {"p": annihilate_point, "1": annihilate_one}
    for s in basis_states(max_size - 1):
        x = FockVector.basis(s)
        for k in range(1, max_size):
            for l in range(1, max_size):
                for a, ann in annihilators.items():
                    for b, cre in creators.items():
                        lhs = ann(k, cre(l, x)) - cre(l, ann(k, x))
                        expected = k * pair.get((a, b), 0) if k == l else 0
                        if lhs != x.scale(expected):
                            bad.append((a, k, b, l, s))
                # creators commute among themselves, as do annihilators
                for b1, c1 in creators.items():
                    for b2, c2 in creators.items():
                        if c1(k, c2(l, x)) != c2(l, c1(k, x)):
                            bad.append(("create", b1, k, b2, l, s))
                for a1, n1 in annihilators.items():
                    for a2, n2 in annihilators.items():
                        if n1(k, n2(l, x)) != n2(l, n1(k, x)):
                            bad.append(("annihilate", a1, k, a2, l, s))
    return bad


def monomial_pairing(left: MonomialState, right: MonomialState) -> Fraction:
    """Bilinear pairing with alpha_k[a] adjoint to alpha_{-k}[a], up to powers of u.

    Evaluated by moving each creation of ``left`` across as an annihilator.
    """
    combo: Combo = {right: Fraction(1)}
    for cls, k in left:
        combo = apply_to_combo(("annihilate", cls, k), combo)
    return combo.get((), Fraction(0))
