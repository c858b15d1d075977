from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from severi_fock.coeffring import Coefficient, Truncation
from severi_fock.fock import FockVector, basis_states, inner_product, state
from severi_fock.operators import (
    OperatorConfig,
    apply_M,
    apply_M_adjoint,
    apply_M_primed,
    build_M_from_fields,
    q1_weight,
)


def ket(mu=(), nu=(), c=None):
    return FockVector.basis(state(mu, nu), c or Coefficient.constant(1))


def mono(e_u=0, e_q1=0, e_q2=0, v=1):
    return Coefficient.monomial(e_u, e_q1, e_q2, v)


K1 = OperatorConfig(1)


def test_M_examples_k1():
    assert apply_M(K1, ket()) == ket((1,), c=mono(0, 1, 1))
    assert apply_M(K1, ket((1,))) == ket(nu=(1,)) + ket((1, 1), c=mono(0, 1, 1, 2))
    want = ket((2,), c=mono(0, 1, 1, 2)) + ket((1, 1), c=mono(1, 1, 1)) + \
        ket((1,), (1,), c=mono(0, 1, 1))
    assert apply_M(K1, ket(nu=(1,))) == want


def test_M_k0_contains_identity_term():
    out = apply_M(OperatorConfig(0), ket((2,)))
    assert out.coefficient(state((2,))).extract(-1, 0, 1) == 1


def test_adjoint_examples():
    out = apply_M_adjoint(K1, ket((1, 1, 1)))
    assert out.coefficient(state((1, 1), (1,))) == 1
    assert not apply_M_adjoint(K1, ket())


def test_primed_examples():
    assert apply_M_primed(K1, ket()) == ket((1,), c=mono(0, 0, 1))
    k0 = OperatorConfig(0)
    assert apply_M_primed(k0, ket((1,))) == apply_M(k0, ket((1,)))
    out = apply_M_primed(OperatorConfig(2), ket(nu=(1,)))
    assert out.coefficient(state((3,))) == mono(0, 0, 1, 3)


def test_q1_weight():
    assert q1_weight(ket()) == ket()
    assert q1_weight(ket((2,), (1,))) == ket((2,), (1,), c=mono(0, 3, 0))
    x = ket((1,)) + ket(nu=(2,), c=mono(1))
    assert q1_weight(x) == q1_weight(ket((1,))) + q1_weight(ket(nu=(2,), c=mono(1)))


def test_truncation_drops_b_terms():
    cfg = OperatorConfig(1, trunc=Truncation(0, 0))
    assert apply_M(cfg, ket()) == FockVector()
    assert apply_M(cfg, ket((1,))) == ket(nu=(1,))


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_degree_bookkeeping(k):
    cfg = OperatorConfig(k)
    for s in basis_states(4):
        for t, c in apply_M(cfg, FockVector.basis(s)).terms.items():
            for (_, e_q1, e_q2) in c.terms:
                assert e_q2 in (0, 1)
                assert t.size - s.size == (k if e_q2 else 0)
                assert e_q1 == (k if e_q2 else 0)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
@pytest.mark.parametrize("conv", ["printed", "alternate"])
def test_fields_match_direct(k, conv):
    cfg = OperatorConfig(k, u_convention=conv)
    fields = build_M_from_fields(cfg)
    for s in basis_states(5):
        x = FockVector.basis(s)
        assert fields(x) == apply_M(cfg, x), s


def test_field_pieces():
    fields = build_M_from_fields(K1)
    assert fields(ket()) == ket((1,), c=mono(0, 1, 1))
    assert fields(ket((1,))).coefficient(state((), (1,))) == 1


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_adjointness_on_basis(k):
    cfg = OperatorConfig(k)
    states = basis_states(4)
    for x in states:
        mx = apply_M(cfg, FockVector.basis(x))
        for y in states:
            assert inner_product(mx, FockVector.basis(y)) == \
                inner_product(FockVector.basis(x), apply_M_adjoint(cfg, FockVector.basis(y)))


small_states = st.sampled_from(basis_states(3))
scalars = st.fractions(min_value=-3, max_value=3, max_denominator=5)


@settings(max_examples=40, deadline=None)
@given(small_states, small_states, scalars, scalars, st.integers(0, 3))
def test_linearity(s, t, a, b, k):
    cfg = OperatorConfig(k)
    x, y = FockVector.basis(s), FockVector.basis(t)
    lhs = apply_M(cfg, x.scale(a) + y.scale(b))
    assert lhs == apply_M(cfg, x).scale(a) + apply_M(cfg, y).scale(b)


def test_config_validation():
    with pytest.raises(ValueError):
        OperatorConfig(-1)
    with pytest.raises(ValueError):
        OperatorConfig(1, u_convention="other")
    with pytest.raises(ValueError):
        OperatorConfig(1, cap_convention="other")
    assert OperatorConfig(4).k == 4  # raw operators accept any k
    # creation scalar prod j^m_j, u^(l - 1)
    assert apply_M(OperatorConfig(4), ket()) == ket((4,), c=mono(0, 4, 1, 4)) + \
        ket((3, 1), c=mono(1, 4, 1, 3)) + ket((2, 2), c=mono(1, 4, 1, 4)) + \
        ket((2, 1, 1), c=mono(2, 4, 1, 2)) + \
        ket((1, 1, 1, 1), c=mono(3, 4, 1, 1))
