from fractions import Fraction

import pytest

from severi_fock import engine
from severi_fock.caps import (
    _exp_series,
    cap_table,
    grading_defect,
    support_ok,
    vector_v,
    vector_v_empty,
    vector_w,
    vector_w_factored,
)
from severi_fock.coeffring import Coefficient, Truncation
from severi_fock.fock import VACUUM, FockVector, inner_product, state
from severi_fock.operators import OperatorConfig, apply_M

T = Truncation(4, 3)


def test_vector_v():
    v = vector_v(T).vec
    assert v.coefficient(state((1, 1))) == 1
    assert not v.coefficient(state((2,)))
    assert v.coefficient(VACUUM) == 1
    assert len(v) == 5
    assert vector_v_empty().vec == FockVector.basis(VACUUM)


def test_w1_corrected():
    w = vector_w(1, T).vec
    assert w.coefficient(state((1,))).extract(0, 1, 0) == 1
    assert w.coefficient(VACUUM).extract(-1, 0, 1) == 1
    assert w.coefficient(VACUUM).extract(-2, 0, 2) == Fraction(1, 2)


def test_w2_and_w3_coefficients():
    w2 = vector_w(2, T).vec
    assert w2.coefficient(state((1,))) == Coefficient.monomial(0, 1, 0) + Coefficient.monomial(0, 1, 1)
    w3 = vector_w(3, T).vec
    assert w3.coefficient(state((), (2,))).extract(0, 2, 2) == Fraction(-1, 2)
    assert w3.coefficient(state((2,))).extract(0, 2, 1) == 2  # alpha_{-2}[1] v = 2|(2)>
    assert w3.coefficient(state((1, 1))).extract(1, 2, 1) == 1


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_support_grading_and_factored_form(k):
    w = vector_w(k, Truncation(5, 3)).vec
    assert support_ok(w, k)
    for s, c in w.terms.items():
        for e_u, e_q1, e_q2 in c.terms:
            assert grading_defect(s, e_u, e_q2, k) == 0
            assert e_q1 == s.size
    assert vector_w_factored(k, Truncation(5, 3)) == w


@pytest.mark.parametrize("k", [1, 2, 3])
def test_q2_zero_part_is_fiber_cap(k):
    w = vector_w(k, T).vec
    for s, c in w.terms.items():
        if c.substitute_q2_zero():
            assert not s.nu and set(s.mu) <= {1}


def test_rejects_large_k_and_bad_convention():
    with pytest.raises(ValueError):
        vector_w(4, T)
    with pytest.raises(ValueError):
        cap_table(1, "other")


def test_printed_w1_loses_the_fiber():
    printed = OperatorConfig(1, cap_convention="printed")
    assert engine.gw_invariant(1, 0, 1, 0, printed) == 0
    assert engine.gw_invariant(1, 0, 1, 0) == 1


def _f3_with_fixed_two(coeff, g, d1, d2):
    t = Truncation(d1, d2)
    table = [c._replace(coeff=Fraction(coeff)) if c.fixed == (2,) else c
             for c in cap_table(3, "corrected", d1)]
    x = _exp_series(table, FockVector.basis(VACUUM), t)
    cfg = OperatorConfig(3, trunc=t)
    for _ in range(engine.n_points(3, g, d1, d2)):
        x = apply_M(cfg, x)
    return inner_product(vector_v(t).vec, x, t).extract(g - 1, d1, d2)


def test_w3_fixed_two_coefficient_pinned_by_deformation():
    target = engine.gw_invariant(1, 0, 3, 2)
    assert target == 12
    assert _f3_with_fixed_two(1, 0, 5, 2) == target
    assert _f3_with_fixed_two(2, 0, 5, 2) == 16
