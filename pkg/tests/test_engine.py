from fractions import Fraction

import pytest

from severi_fock import engine
from severi_fock.coeffring import Truncation
from severi_fock.engine import (
    IncompleteTableError,
    TruncationError,
    ab_check,
    blockgoettsche_Z,
    connected_from_disconnected,
    deformation_check,
    gw_invariant,
    n_points,
    n_points_p2,
    n_points_relative,
    p2_relative,
    p2_severi,
    relative_invariant,
    transverse_invariant,
)
from severi_fock.operators import OperatorConfig


def test_point_counts():
    assert n_points(1, 0, 1, 0) == 1
    assert n_points(2, 0, 3, 1) == 5
    assert n_points_p2(0, 3) == 8
    assert n_points_relative(1, 0, 2, 1, (1, 1), (), (1,), ()) == n_points(1, 0, 2, 1)
    assert n_points_relative(1, 0, 1, 1, (), (1,), (), ()) == n_points(1, 0, 1, 1) - 1
    assert n_points_relative(1, 0, 2, 0, (2,), (), (1, 1), ()) == n_points(1, 0, 2, 0) - 1


@pytest.mark.parametrize("g,d,want", [(0, 1, 1), (0, 2, 1), (-1, 2, 3), (0, 3, 12), (-1, 3, 21)])
def test_p2_disconnected(g, d, want):
    assert p2_severi(g, d) == want


@pytest.mark.parametrize("k,g,d1,d2,want", [
    (1, 0, 0, 1, 1), (1, 0, 1, 0, 1), (1, 0, 1, 1, 1), (1, -1, 1, 1, 1),
    (0, 0, 1, 0, 1), (0, 0, 0, 1, 1), (0, 0, 1, 1, 1), (2, 0, 1, 1, 1), (3, 0, 1, 0, 1),
])
def test_calibration(k, g, d1, d2, want):
    assert gw_invariant(k, g, d1, d2) == want


def test_negative_n_is_zero():
    assert gw_invariant(1, -5, 1, 1) == 0
    assert p2_severi(-3, 1) == 0
    assert transverse_invariant(2, -9, 2, 1) == 0


def test_transverse_equals_gw_for_k0_and_matches_relative():
    for d1, d2, g in [(1, 1, 0), (2, 1, 0), (2, 1, -1), (2, 2, 1)]:
        assert transverse_invariant(0, g, d1, d2) == gw_invariant(0, g, d1, d2)
    for k in (0, 1, 2):
        for d1, d2 in [(1, 0), (2, 1), (3, 1)]:
            if d1 - k * d2 < 0:
                continue
            for g in range(-2, 2):
                rel = relative_invariant(k, g, d1, d2, (1,) * d1, (), (1,) * (d1 - k * d2), ())
                assert rel == transverse_invariant(k, g, d1, d2)


def test_transverse_d2_zero_matches_gw():
    for g in (-1, 0):
        assert transverse_invariant(2, g, 2, 0) == gw_invariant(2, g, 2, 0)


def test_relative_examples():
    # size mismatch on the E side
    assert relative_invariant(1, 0, 0, 1, nu_e=(1,)) == 0
    # line through a fixed point of C: strict transform through one more point
    assert relative_invariant(1, 0, 1, 1, nu_c=(1,)) == 1
    # tangent conic-type class on F_0 with a free tangency of order 2 along C
    assert relative_invariant(0, 0, 2, 1, mu_c=(2,), mu_e=(1, 1)) == 2
    assert relative_invariant(1, -9, 1, 1, nu_c=(1,)) == 0


def test_p2_relative():
    assert p2_relative(0, 1, mu=(1,)) == 1
    assert p2_relative(0, 1, nu=(1,)) == 1
    assert p2_relative(0, 2, (1,), ()) == 0
    assert p2_relative(0, 2, mu=(2,)) == 2  # conics through four points tangent to a line
    assert p2_relative(0, 2, nu=(2,)) == 1


def test_truncation_error_and_bad_input():
    cfg = OperatorConfig(1, trunc=Truncation(1, 1))
    with pytest.raises(TruncationError):
        gw_invariant(1, 0, 2, 1, cfg)
    assert gw_invariant(1, 0, 1, 1, cfg) == 1
    with pytest.raises(ValueError):
        gw_invariant(4, 0, 1, 1)
    with pytest.raises(ValueError):
        gw_invariant(1, 0, 0, 0)
    with pytest.raises(ValueError):
        p2_severi(0, 0)


def test_forward_equals_adjoint():
    cases = engine.adjoint_form_check([("p2", g, d) for d in (1, 2, 3) for g in (-1, 0, 1)] +
                                      [("gw", 1, 0, 1, 1), ("gw", 2, 0, 2, 1)])
    assert all(c.forward == c.adjoint for c in cases)


@pytest.mark.parametrize("g,d1,d2", [(0, 2, 0), (0, 2, 1), (-1, 2, 1), (1, 2, 1), (0, 4, 1), (0, 4, 2)])
def test_ab_identity(g, d1, d2):
    r = ab_check(g, d1, d2)
    assert r.equal, r
    with pytest.raises(ValueError):
        ab_check(0, 1, 1)


def test_deformation_examples():
    assert deformation_check(0, 1, 1).even.equal
    assert deformation_check(0, 1, 0).odd == (1, 1)
    for g in (-1, 0, 1):
        r = deformation_check(g, 3, 1)
        assert r.even.equal and r.odd.equal
    # the opposite shift changes the point count and breaks the identity
    bad = deformation_check(1, 0, 2, shift=+1).even
    assert not bad.equal


def test_blockgoettsche_reindexing():
    r = blockgoettsche_Z(2, 0, 2, 1)
    assert r.reindexed == r.transverse == transverse_invariant(2, 0, 2, 1)
    for d1 in (1, 2):
        r = blockgoettsche_Z(0, 0, d1, 0)
        assert r.reindexed == r.transverse
    assert blockgoettsche_Z(1, 0, 1, 1).literal == 0


def test_connected_p2():
    table = engine.p2_table(4)
    conn = {(r.d1, r.g): r.value for r in connected_from_disconnected(table)}
    assert conn[(2, -1)] == 0 and conn[(3, -1)] == 0
    assert conn[(3, 0)] == 12 and conn[(4, 0)] == 620 and conn[(4, 3)] == 1
    # the decomposition of line pairs: binom(4,2)/2! * N_line^2
    assert p2_severi(-1, 2) == Fraction(6, 2) * p2_severi(0, 1) ** 2
    with pytest.raises(IncompleteTableError):
        connected_from_disconnected([r for r in table if not (r.d1 == 1 and r.n == 1)])
    assert connected_from_disconnected([]) == []


def test_connected_fk_rulings():
    table = engine.fk_table(0, 2, 1)
    conn = {(r.d1, r.d2, r.g): r.value for r in connected_from_disconnected(table)}
    assert conn[(1, 1, 0)] == 1
    assert conn[(2, 0, -1)] == 0  # two fibers are disconnected
    assert conn[(2, 1, 0)] == 1


def test_genus_bound_and_zero_tail():
    assert engine.genus_bound(1, 2, 1) == engine.arithmetic_genus(1, 2, 1) == 0
    assert engine.genus_bound(0, 2, 2) == 1
    for k in range(4):
        for d1, d2 in [(1, 0), (2, 1), (3, 1), (2, 2)]:
            top = engine.genus_bound(k, d1, d2)
            assert gw_invariant(k, top + 1, d1, d2) == 0


def test_alternate_u_convention_changes_counts():
    alt = OperatorConfig(1, u_convention="alternate")
    # lines and line pairs survive, the smooth conic is lost
    assert p2_severi(0, 1, alt) == 1
    assert p2_severi(0, 2, alt) == 0
    assert p2_severi(-1, 2, alt) == 3
