import pickle
from fractions import Fraction

import pytest

from rootlab.bigreal import PrecisionContext, format_scientific
from rootlab.errors import DomainError, ParseError


def _ctx(bits=128):
    return PrecisionContext(bits)


def test_precision_context_rejects_small_precision():
    with pytest.raises(ValueError):
        PrecisionContext(32)


def test_decimal_digits():
    assert PrecisionContext(4096).decimal_digits == 1233
    assert PrecisionContext(256).decimal_digits == 77


def test_format_scientific():
    ctx = _ctx()
    assert format_scientific(ctx.make("0.25"), 3) == "2.50e-1"
    assert format_scientific(ctx.make("10.1"), 3) == "1.01e+1"
    assert format_scientific(ctx.make("-1.5"), 3) == "-1.50e+0"
    assert format_scientific(ctx.zero(), 3) == "0"


def test_format_scientific_rounds_half_to_even_and_carries():
    ctx = _ctx()
    assert format_scientific(ctx.make("0.125"), 2) == "1.2e-1"
    assert format_scientific(ctx.make("9.996"), 3) == "1.00e+1"


def test_decimal_round_trip_at_roundtrip_digits():
    ctx = _ctx(256)
    for value in (Fraction(1, 3), Fraction(-22, 7), Fraction(10**40 + 1, 10**45)):
        x = ctx.make(value)
        assert ctx.make(format_scientific(x, ctx.roundtrip_digits)) == x


def test_floor_log10():
    ctx = _ctx()
    assert ctx.make("2.71e-142").floor_log10() == -142
    assert ctx.make(1000).floor_log10() == 3
    assert ctx.make("-0.5").floor_log10() == -1


def test_domain_errors():
    ctx = _ctx()
    with pytest.raises(DomainError):
        ctx.make(-1).ln()
    with pytest.raises(DomainError):
        ctx.make(1) / ctx.zero()
    with pytest.raises(DomainError):
        ctx.make(2**31).exp()


def test_parse_errors():
    ctx = _ctx()
    with pytest.raises(ParseError):
        ctx.make("1.2.3")
    with pytest.raises(ParseError):
        ctx.make("abc")


def test_floats_are_rejected():
    ctx = _ctx()
    with pytest.raises(TypeError):
        ctx.make(0.5)
    with pytest.raises(TypeError):
        ctx.make(1) + 0.5


def test_mixed_contexts_use_left_operand_precision():
    low, high = _ctx(128), _ctx(256)
    total = low.make(1) + high.make(Fraction(1, 3))
    assert total.context.bits == 128
    assert abs(total - Fraction(4, 3)) <= low.ulp_scale(2)


def test_exact_rationals():
    ctx = _ctx()
    assert (ctx.make(3) / 4).as_fraction() == Fraction(3, 4)
    assert ctx.make(Fraction(1, 2)) == Fraction(1, 2)
    assert ctx.make(2) ** -2 == Fraction(1, 4)


def test_pickle_round_trip():
    x = _ctx(512).make(Fraction(1, 7))
    restored = pickle.loads(pickle.dumps(x))
    assert restored == x
    assert restored.context.bits == 512
