"""Laurent scalar arithmetic, precision windows, residues, one-forms."""

from fractions import Fraction

import pytest

from formalconn.errors import PrecisionError, ZeroLeading
from formalconn.scalars import format_scalar, get_field, parse_scalar
from formalconn.series import INF, LaurentScalar, OneForm, residue

from helpers import LS, random_series, seeded


def test_mul_inverse_powers():
    assert LS([(-1, 1)]) * LS([(1, 1)]) == LS([(0, 1)])


def test_mul_exact_polynomials():
    assert LS([(0, 1), (1, 1)]) * LS([(0, 1), (1, -1)]) == LS([(0, 1), (2, -1)])


def test_mul_precision_window():
    # (t^-2 + 1 known to N=3 digits) * (t^-1 known to N=3 digits)
    a = LS([(-2, 1), (0, 1)], prec=1)
    b = LS([(-1, 1)], prec=2)
    prod = a * b
    assert prod.coeff(-3) == 1 and prod.coeff(-1) == 1
    assert prod.window() == (-3, 0)


def test_inverse_monomial_exact():
    inv = LS([(-3, 1)]).inverse()
    assert inv == LS([(3, 1)]) and inv.is_exact


def test_inverse_geometric():
    inv = LS([(0, 1), (1, 1)]).inverse()
    for k in range(0, 10):
        assert inv.coeff(k) == (-1) ** k


def test_inverse_scalar_multiple():
    assert LS([(1, 2)]).inverse() == LS([(-1, (1, 2))])


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroLeading):
        LaurentScalar.zero().inverse()
    with pytest.raises(ZeroLeading):
        LaurentScalar.zero(prec=5).inverse()


def test_mul_associative_commutative_and_inverse_roundtrip():
    for digits in (5, 20):
        rng = seeded(100 + digits)
        for _ in range(25):
            a = random_series(rng, -3, 4, prec=digits)
            b = random_series(rng, -2, 3, prec=digits)
            c = random_series(rng, -1, 5, prec=digits)
            assert (a * b).agrees(b * a)
            assert ((a * b) * c).agrees(a * (b * c))
            if not a.is_zero():
                inv = a.inverse()
                assert (a * inv).agrees(LaurentScalar.one())
                assert (inv * a).agrees(LaurentScalar.one())


def test_coeff_outside_window_raises():
    a = LS([(0, 1)], prec=3)
    with pytest.raises(PrecisionError):
        a.coeff(3)


def test_residue_examples():
    nu_dt = OneForm.dt()
    nu = OneForm.dt_over_t()
    assert residue(LS([(-1, 1)]), nu_dt) == 1
    assert residue(LaurentScalar.one(), nu) == 1
    assert residue(LS([(-2, 3), (-1, 5)]), nu) == 0


def test_residue_precision_error():
    a = LaurentScalar.zero(prec=-2)
    with pytest.raises(PrecisionError):
        residue(a, OneForm.dt())


def test_residue_of_derivative_vanishes():
    rng = seeded(7)
    for _ in range(20):
        a = random_series(rng, -4, 5)
        assert residue(a.derivative(), OneForm.dt()) == 0


def test_tau_preserves_window():
    a = LS([(-2, 1), (3, 5)], prec=6)
    assert a.tau().prec == 6
    assert a.tau().coeff(-2) == -2
    assert a.tau().coeff(3) == 15


def test_one_form_orders():
    assert OneForm.dt_over_t().order == -1
    assert OneForm.dt().order == 0
    assert OneForm.dt_over_t_pow(3).order == -3


def test_zero_to_precision_carries_window():
    z = LaurentScalar.zero(prec=5)
    assert z.is_zero() and z.prec == 5 and z.order == 5
    assert (z + LS([(7, 1)])).is_zero()


def test_serialization_roundtrip():
    field = get_field("Q")
    a = LS([(-2, (3, 7)), (0, 1), (4, (-1, 2))])
    back = LaurentScalar.from_json(a.to_json(), field)
    assert back == a


def test_scalar_parse_format_roundtrip_qi():
    field = get_field("Q(i)")
    x = field.from_coords([Fraction(1, 2), Fraction(-3, 4)])
    assert parse_scalar(format_scalar(x), field) == x


def test_scalar_field_arithmetic():
    qi = get_field("Q(i)")
    i = qi.generator()
    assert i * i == -1
    assert (1 + i) * (1 - i) == 2
    assert (i / (1 + i)) * (1 + i) == i
    z5 = get_field("Q(zeta_5)")
    z = z5.generator()
    assert z ** 5 == 1 and z ** 4 != 1
    assert z * z.inverse() == 1
