from fractions import Fraction

import pytest

from rootlab.errors import NonInvertibleLeadingCoefficient, ValuationError
from rootlab.orderlab import GenericWeight, Poly, Series, c, compose_f, expand_weight, symbols
from rootlab.orderlab.poly import ONE, ZERO
from rootlab.orderlab.series import format_series


def _e(truncation=8):
    return Series.variable(truncation)


def test_poly_arithmetic_and_printing():
    c2, c3 = c(2), c(3)
    assert str(c3 * c2 * 2) == "2*c2*c3"
    assert str(c2 - c2) == "0"
    assert (c2 + 1) * (c2 - 1) == c2**2 - 1
    assert str(-(c2**2) + Fraction(1, 2)) == "-c2^2 + 1/2"


def test_unit_symbols_invert():
    assert c(1) * c(1) ** -1 == ONE
    assert (2 * c(2)).inverse() == Fraction(1, 2) * c(2) ** -1
    with pytest.raises(NonInvertibleLeadingCoefficient):
        (c(1) + c(2)).inverse()
    with pytest.raises(NonInvertibleLeadingCoefficient):
        Poly.symbol("M0", -1)


def test_poly_queries():
    (m0,) = symbols("M0")
    p = m0 * c(2) ** 2 + 2 * c(3) * c(2)
    assert p.divisible_by("c2")
    assert not p.divisible_by("c3")
    assert p.degree_in("c2") == 2
    assert p.symbols() == {"M0", "c2", "c3"}
    assert p.substitute({"M0": 2}) == 2 * c(2) ** 2 + 2 * c(2) * c(3)


def test_series_products_and_quotients():
    e = _e()
    square = e * e
    assert square[1] == ZERO and square[2] == ONE

    product = (1 + e * c(2)) * (1 - e * c(2))
    assert product[0] == ONE
    assert product[1] == ZERO
    assert product[2] == -(c(2) ** 2)

    assert ((e + e * e) / (1 + e)).agrees_with(e)


def test_series_precision_tracking():
    e = _e(6)
    known = Series([0, 1, c(2)], precision=3, truncation=6)
    product = known * (e * e)
    assert product.precision == 5
    with pytest.raises(IndexError):
        product[5]


def test_division_by_a_series_of_higher_valuation_fails():
    e = _e()
    with pytest.raises(ValuationError):
        e / (e * e)
    with pytest.raises(ValuationError):
        e / Series([], truncation=8)


def test_binomial_power():
    e = _e(5)
    root = (1 + e) ** Poly.constant(Fraction(1, 2))
    assert root[1] == Fraction(1, 2)
    assert root[2] == Fraction(-1, 8)
    assert ((1 + e) ** -1).agrees_with(1 / (1 + e))


def test_taylor_composition():
    e = _e(6)
    f = compose_f(e)
    slope = compose_f(e, derivative=True)
    assert f[1] == c(1)
    for k in range(2, 7):
        assert f[k] == c(1) * c(k)
    assert slope[0] == c(1)
    assert slope[1] == 2 * c(1) * c(2)
    assert slope[2] == 3 * c(1) * c(3)
    assert (f * slope)[2] == 3 * c(1) ** 2 * c(2)
    with pytest.raises(ValuationError):
        compose_f(1 + e)


def test_newton_ratio():
    e = _e(6)
    ratio = compose_f(e) / compose_f(e, derivative=True)
    assert ratio[1] == ONE
    assert ratio[2] == -c(2)
    assert ratio[3] == 2 * c(2) ** 2 - 2 * c(3)


def test_format_series():
    text = format_series(c(2) * _e(4) ** 2)
    assert text == "(c2)*e^2 + O(e^5)"


def test_generic_weight_expansion():
    e = _e(6)
    weight = GenericWeight("G", ("t1",), offset=2, conditions={(0,): 1, (1,): 2, (2,): 8})
    expanded = expand_weight(weight, [e])
    assert [expanded[k] for k in range(3)] == [ONE, 2 * ONE, 4 * ONE]
    assert expanded[3] == Poly.symbol("G_3")
    assert expanded.precision == 5


def test_generic_weight_names_free_coefficients():
    e = _e(6)
    weight = GenericWeight("H", ("t1", "t2"), offset=4, conditions={(0, 0): 1}, names={(1, 0): "R0"})
    expanded = expand_weight(weight, [e, e * e])
    assert expanded[1] == Poly.symbol("R0")
    assert expanded[2] == Poly.symbol("H_20") + Poly.symbol("H_01")


def test_generic_weight_needs_vanishing_arguments():
    weight = GenericWeight("G", ("t1",), offset=2)
    with pytest.raises(ValuationError):
        expand_weight(weight, [1 + _e()])
