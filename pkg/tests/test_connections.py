"""Connections: gauge action, containment, slope against the Katz
oracle, splitting, diagonalization."""

from fractions import Fraction

import pytest

from formalconn.connections import (FormalConnection, contained_stratum,
                                    diagonalize, fundamental_stratum,
                                    gauge_transform, slope, split_connection)
from formalconn.errors import NotRegular, SingularGauge
from formalconn.formal_types import FormalType
from formalconn.matrices import LaurentMatrix, pairing
from formalconn.parahoric import filtration_degree, in_filtration, standard_chain
from formalconn.scalars import get_field
from formalconn.series import INF, LaurentScalar, OneForm
from formalconn.torus import TorusData

from helpers import (LS, katz_slope_oracle, lmat, random_matrix,
                     random_unit_matrix, seeded)


def witten():
    m = lmat([[[], [(-3, 1)]], [[(-2, 1)], []]])
    return FormalConnection.from_dt_matrix(m, OneForm.dt())


def test_gauge_identity():
    c = FormalConnection(lmat([[[(-2, 1)], [(0, 3)]], [[], [(-1, 1)]]]))
    g = LaurentMatrix.identity(2)
    assert gauge_transform(g, c).matrix.agrees(c.matrix)


def test_gauge_constant_is_conjugation():
    rng = seeded(3)
    c = FormalConnection(random_matrix(rng, 2, lo=-2, hi=2))
    g = lmat([[[(0, 1)], [(0, 2)]], [[(0, 1)], [(0, 3)]]])
    out = gauge_transform(g, c)
    assert out.matrix.agrees(g * c.matrix * g.inverse())


def test_gauge_scalar_t():
    # n = 1, g = t, [nabla_tau] = a/t: result a/t - 1
    c = FormalConnection(lmat([[[(-1, 5)]]]))
    g = lmat([[[(1, 1)]]])
    out = gauge_transform(g, c)
    assert out.matrix.rows[0][0].agrees(LS([(-1, 5), (0, -1)]))


def test_gauge_group_action():
    rng = seeded(5)
    c = FormalConnection(random_matrix(rng, 2, lo=-2, hi=2))
    g = random_unit_matrix(rng, 2) + lmat([[[(0, 1)], []], [[], []]])
    h = random_unit_matrix(rng, 2)
    lhs = gauge_transform(g * h, c)
    rhs = gauge_transform(g, gauge_transform(h, c))
    assert lhs.matrix.agrees(rhs.matrix)


def test_gauge_singular_raises():
    c = FormalConnection(lmat([[[(-1, 1)], []], [[], [(-1, 1)]]]))
    g = lmat([[[(0, 1)], [(0, 1)]], [[(0, 1)], [(0, 1)]]])
    with pytest.raises(SingularGauge):
        gauge_transform(g, c)


def test_contained_stratum_examples():
    # t^-r times regular constant diagonal, maximal parahoric
    mx = standard_chain((2,))
    d = FormalConnection(lmat([[[(-3, 1)], []], [[], [(-3, 4)]]]))
    s = contained_stratum(d, mx)
    assert s.r == 3 and s.ctx.period == 1
    # regular singular: r = 0
    rs = FormalConnection(lmat([[[(0, 1)], [(1, 2)]], [[], []]]))
    assert contained_stratum(rs, mx).r == 0
    # Witten with the Iwahori: r = 3, representative varpi^-3
    iw = standard_chain((1, 1))
    sw = contained_stratum(witten(), iw)
    assert sw.r == 3
    assert sw.graded_rep().pattern == \
        contained_stratum(FormalConnection(iw.varpi_power(-3)), iw).graded_rep().pattern


def test_slope_examples():
    assert slope(witten()) == Fraction(3, 2)
    rs = FormalConnection(lmat([[[(0, (1, 2))], [(2, 1)]], [[(1, 3)], []]]))
    assert slope(rs) == 0
    d5 = FormalConnection(lmat([[[(-5, 1)], []], [[], [(-5, 3)]]]))
    assert slope(d5) == 5
    assert slope(FormalConnection(LaurentMatrix.zero(2))) == 0


def test_slope_matches_katz_oracle_spot():
    cases = [
        witten(),
        FormalConnection(lmat([[[], [(-2, 1)]], [[(0, 1)], []]])),
        FormalConnection(lmat([[[(-1, 1)], [(-2, 1)]], [[(0, 1)], [(-1, -1)]]])),
        FormalConnection(lmat([[[], [(-3, 1)], []],
                               [[], [], [(-3, 1)]],
                               [[(-2, 1)], [], []]])),
        FormalConnection(lmat([[[(-4, 2)], [(0, 1)]], [[(1, 1)], [(-1, 1)]]])),
    ]
    for c in cases:
        assert slope(c) == katz_slope_oracle(c)


def test_fundamental_stratum_is_contained_and_fundamental():
    from formalconn.strata import is_fundamental
    h, cur, s = fundamental_stratum(witten())
    assert is_fundamental(s)
    assert filtration_degree(cur.matrix, s.ctx) == -s.r
    # the stratum representative is the gauged matrix itself
    assert s.beta is cur.matrix


def test_tau_filtration_and_parahoric_derivative():
    # tau preserves filtration degrees; (tau p) p^-1 in P^1 for p in P
    rng = seeded(11)
    for blocks in ((1, 1), (2,), (1, 1, 1)):
        ctx = standard_chain(blocks)
        conn = FormalConnection(LaurentMatrix.zero(ctx.n))
        for _ in range(6):
            x = random_matrix(rng, ctx.n, lo=-2, hi=3)
            if x.is_zero():
                continue
            tx = conn.tau_of_matrix(x)
            if not tx.is_zero():
                assert filtration_degree(tx, ctx) >= filtration_degree(x, ctx)
            p = random_unit_matrix(rng, ctx.n)
            tp = conn.tau_of_matrix(p) * p.inverse()
            assert in_filtration(tp, ctx, 1)


def test_gauge_coadjoint_agreement_on_parahoric():
    # for p in P the gauge and adjoint actions differ by P^1 = P^perp
    rng = seeded(13)
    ctx = standard_chain((1, 1))
    conn = FormalConnection(ctx.varpi_power(-3))
    for _ in range(6):
        p = random_unit_matrix(rng, 2)
        moved = gauge_transform(p, conn)
        diff = moved.matrix - p * conn.matrix * p.inverse()
        assert in_filtration(diff, ctx, 1)


def test_split_connection_contract():
    # diag leading term with off-diagonal perturbation
    base = lmat([[[(-1, 1)], [(1, 2)]], [[(0, 3)], [(-1, 2)]]])
    conn = FormalConnection(base)
    ctx = standard_chain((2,))
    digits = 7
    p, out = split_connection(conn, ctx, 1, [[0], [1]], digits=digits)
    off = lmat([[[], []], [[], []]])
    off.rows[0][1] = out.matrix.rows[0][1]
    off.rows[1][0] = out.matrix.rows[1][0]
    assert in_filtration(off, ctx, 1 - 1 + digits)


def test_split_connection_depth_zero_resonance_free():
    base = lmat([[[(0, 0)], [(1, 1)]], [[], [(0, (1, 2))]]])
    conn = FormalConnection(base)
    ctx = standard_chain((2,))
    p, out = split_connection(conn, ctx, 0, [[0], [1]], digits=6)
    assert out.matrix.rows[0][1].is_zero() or out.matrix.rows[0][1].order > 6


def test_diagonalize_toral_input_unchanged():
    q = get_field("Q")
    ft = FormalType(TorusData(2, 1), 3, [[Fraction(1), 0, Fraction(2), 0]], q)
    res = diagonalize(FormalConnection(ft.realization()), digits=6)
    assert res.formal_type == ft
    assert res.gauge.agrees(LaurentMatrix.identity(2))


def test_diagonalize_witten():
    res = diagonalize(witten(), digits=6)
    ft = res.formal_type
    assert ft.e == 2 and ft.m == 1 and ft.depth == 3
    assert ft.coeffs[0][0] == 1
    # gauge carries the matrix onto the Cartan representative
    moved = gauge_transform(res.gauge, witten().standardized())
    assert moved.matrix.agrees(res.A_rep.realization(), through=3)


def test_diagonalize_uniqueness_mod_t1():
    rng = seeded(17)
    q = get_field("Q")
    ft = FormalType(TorusData(1, 2), 2,
                    [[Fraction(1), Fraction(4), 0], [Fraction(3), 0, Fraction(2)]], q)
    base = FormalConnection(ft.realization())
    for _ in range(3):
        p = random_unit_matrix(rng, 2)
        res = diagonalize(gauge_transform(p, base), digits=6)
        assert res.formal_type == ft.sorted_blocks()


def test_diagonalize_regular_singular():
    base = lmat([[[(0, (1, 2)), (1, 3)], [(1, 1), (2, 2)]],
                 [[(2, 1)], [(0, (1, 5)), (1, 1)]]])
    res = diagonalize(FormalConnection(base), digits=8)
    ft = res.formal_type
    assert ft.depth == 0 and ft.e == 1 and ft.m == 2
    assert sorted(map(str, ft.leading())) == ["1/2", "1/5"]


def test_diagonalize_zero_connection():
    res = diagonalize(FormalConnection(LaurentMatrix.zero(1)), digits=4)
    assert res.formal_type.depth == 0
    with pytest.raises(NotRegular):
        diagonalize(FormalConnection(LaurentMatrix.zero(2)), digits=4)


def test_diagonalize_resonant_rejected():
    base = lmat([[[(0, 1)], [(1, 1)]], [[], [(0, 0)]]])
    with pytest.raises(NotRegular):
        diagonalize(FormalConnection(base), digits=4)


def test_one_form_rescaling():
    # invariance of slope and formal data under a change of one-form
    w = witten()
    w2 = w.with_one_form(OneForm.dt_over_t_pow(2))
    assert slope(w2) == Fraction(3, 2)
    back = w2.standardized()
    assert back.matrix.agrees(w.standardized().matrix)


def test_connection_serialization_roundtrip():
    w = witten()
    data = w.to_json()
    back = FormalConnection.from_json(data)
    assert back.standardized().matrix.agrees(w.standardized().matrix)
