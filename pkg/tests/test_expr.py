from fractions import Fraction

import pytest

from rootlab.bigreal import PrecisionContext
from rootlab.errors import DomainError, ExpressionSyntaxError, UnknownIdentifier
from rootlab.expr import (
    BinOp,
    Neg,
    Num,
    Pow,
    X,
    constant_value,
    differentiate,
    evaluate_expr,
    make_const,
    parse_expression,
    to_source,
)
from rootlab.funcsuite import SUITE


def _at(source, value, bits=128):
    return evaluate_expr(parse_expression(source), PrecisionContext(bits).make(value))


def test_unary_minus_binds_looser_than_power():
    assert parse_expression("-x^2") == Neg(Pow(X, Num("2")))
    assert _at("-x^2", 3) == -9


def test_power_is_right_associative():
    assert constant_value(parse_expression("2^3^2")) == 512
    assert constant_value(parse_expression("2^-1")) == Fraction(1, 2)


def test_precedence():
    assert parse_expression("1+2*x") == BinOp("+", Num("1"), BinOp("*", Num("2"), X))
    assert _at("(x+1)*(x-1)/4", 3) == 2


def test_f4_vanishes_exactly_at_its_root():
    f4 = next(entry for entry in SUITE if entry.id == "f4")
    assert _at(f4.source, -1).is_zero()


def test_syntax_errors_carry_offsets():
    with pytest.raises(ExpressionSyntaxError) as exc:
        parse_expression("2*(x+1")
    assert exc.value.offset == 6

    with pytest.raises(ExpressionSyntaxError):
        parse_expression("x^x")
    with pytest.raises(ExpressionSyntaxError):
        parse_expression("x^0.5")
    with pytest.raises(ExpressionSyntaxError):
        parse_expression("x+")


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as exc:
        parse_expression("x+sqrt(x)")
    assert exc.value.name == "sqrt"
    assert exc.value.offset == 2


def test_division_by_zero_is_a_domain_error():
    with pytest.raises(DomainError):
        _at("1/(x-1)", 1)


def test_make_const():
    assert make_const(3) == Num("3")
    assert constant_value(make_const(Fraction(-2, 3))) == Fraction(-2, 3)


def test_to_source_round_trips_the_suite():
    for entry in SUITE:
        tree = parse_expression(entry.source)
        assert parse_expression(to_source(tree)) == tree


def test_derivative_matches_central_differences():
    ctx = PrecisionContext(256)
    h = ctx.power_of_ten(-30)
    tolerance = ctx.power_of_ten(-40)
    for entry in SUITE:
        tree = parse_expression(entry.source)
        slope = differentiate(tree)
        x = ctx.make(entry.x0)
        exact = evaluate_expr(slope, x)
        estimate = (evaluate_expr(tree, x + h) - evaluate_expr(tree, x - h)) / (2 * h)
        assert abs(estimate - exact) <= tolerance * max(abs(exact), ctx.make(1)), entry.id


def test_derivative_of_simple_forms():
    assert _at(to_source(differentiate(parse_expression("x^3"))), 2) == 12
    assert _at(to_source(differentiate(parse_expression("ln(x)"))), 4) == Fraction(1, 4)
    assert _at(to_source(differentiate(parse_expression("1/x"))), 2) == Fraction(-1, 4)
