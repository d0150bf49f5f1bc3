import pytest

from rootlab.bigreal import PrecisionContext
from rootlab.errors import NoConvergence
from rootlab.funcsuite import (
    SUITE_IDS,
    EvalCounter,
    TestFunction,
    builtin_function,
    builtin_suite,
    evaluate,
    evaluate_derivative,
    refine_root,
)


def test_suite_ids():
    assert SUITE_IDS == tuple(f"f{i}" for i in range(1, 13))


def test_exact_roots():
    ctx = PrecisionContext(256)
    assert builtin_function("f1", ctx).reference_root == 0
    assert builtin_function("f3", ctx).reference_root == 2
    assert builtin_function("f4", ctx).reference_root == -1
    assert builtin_function("f4", ctx).default_x0 == ctx.make("-0.5")


def test_refined_roots_are_roots():
    ctx = PrecisionContext(256)
    tolerance = ctx.power_of_ten(-60)
    for f in builtin_suite(ctx):
        assert abs(f.value(f.reference_root)) <= tolerance, f.id


def test_f2_root():
    f2 = builtin_function("f2", PrecisionContext(256))
    assert abs(f2.reference_root - PrecisionContext(256).make("1.148538")) < PrecisionContext(256).make("1e-6")


def test_unknown_suite_function():
    with pytest.raises(KeyError):
        builtin_function("f13", PrecisionContext(128))


def test_counters_charge_each_evaluation():
    ctx = PrecisionContext(128)
    f = TestFunction.from_source("cubic", "x^3-2*x")
    counter = EvalCounter()
    assert evaluate(f, ctx.make(2), counter) == 4
    assert evaluate_derivative(f, ctx.make(2), counter) == 10
    evaluate(f, ctx.make(1), counter)
    assert (counter.f_evals, counter.df_evals, counter.total) == (2, 1, 3)


def test_uncounted_access():
    f = TestFunction.from_source("line", "3*x-6")
    assert f.value(PrecisionContext(128).make(2)).is_zero()
    assert f.source == "3*x-6"


def test_refine_root_reaches_context_precision():
    ctx = PrecisionContext(512)
    f = TestFunction.from_source("sqrt2", "x^2-2")
    root = refine_root(f, ctx.make("1.4"))
    assert abs(root * root - 2) <= ctx.power_of_ten(-140)
    assert root.context.bits == 512


def test_refine_root_without_a_real_root():
    f = TestFunction.from_source("noroot", "x^2+1")
    with pytest.raises(NoConvergence):
        refine_root(f, PrecisionContext(128).make("0.5"))
