from fractions import Fraction

import pytest

from rootlab.bigreal import PrecisionContext
from rootlab.errors import (
    DegenerateNodes,
    SingularStep,
    UnknownMethod,
    UnknownParameter,
    WeightConditionViolated,
)
from rootlab.funcsuite import SUITE_IDS, EvalCounter, TestFunction, builtin_function
from rootlab.schemes import (
    METHOD_NAMES,
    Kind,
    NumericEvaluator,
    Status,
    WeightFn,
    builtin_method,
    canonical_name,
    divided_difference,
    iterate,
    second_divided_difference,
    step_family,
    validate_weight,
)


LINEAR_SLOPES = ("1", "-3", "1/7")
LINEAR_ROOTS = ("0", "2", "-5")
SCALES = ("10", "1/3")
DERIVATIVE_BASED_SCALED = ("NM", "SG", "NT1", "NT2", "CH", "GR", "AL", "FD1-M1", "FD1-M2", "FD2-M1", "AL1")
DERIVATIVE_FREE_SCALED = ("SM", "SK2M1", "SK2M2", "TS1", "TS2", "FS2", "FD4", "FD5", "FD6", "FD7")


def _make_function(source, root=None, bits=256):
    f = TestFunction.from_source("test", source)
    if root is not None:
        f = f.with_root(PrecisionContext(bits).make(root))
    return f


def _one_step(method, f, x0, bits=256):
    ctx = PrecisionContext(bits)
    counter = EvalCounter()
    x1 = method.step(NumericEvaluator(f, counter, ctx), ctx.make(x0))
    return ctx.convert(x1), counter


def test_registry_contents():
    assert len(METHOD_NAMES) == 27
    for name in METHOD_NAMES:
        method = builtin_method(name)
        assert method.name == name
        assert method.evals_per_iteration == (2 if name in ("NM", "SM") else 4)


def test_claimed_orders():
    orders = {name: builtin_method(name).claimed_order for name in METHOD_NAMES}
    assert orders["NM"] == orders["SM"] == 2
    assert orders["FD1-M1"] == 6
    assert orders["FD1-M2"] == 7
    assert orders["FD2-M1"] == orders["AL1"] == orders["FD7"] == 7
    assert orders["FD4"] == orders["FD5"] == orders["FD6"] == 6


def test_kinds_and_default_kappa():
    assert builtin_method("FD1-M1").kind is Kind.DERIVATIVE_BASED
    assert builtin_method("FD1-M1").kappa is None
    assert builtin_method("FD5").kind is Kind.DERIVATIVE_FREE
    assert builtin_method("FD5").kappa == Fraction(1, 100)
    assert builtin_method("TS1").kappa == -1


def test_canonical_name_and_unknown_method():
    assert canonical_name("fd1-m2") == "FD1-M2"
    with pytest.raises(UnknownMethod):
        builtin_method("FD9")


def test_parameter_overrides():
    changed = builtin_method("SG", a="2")
    assert changed.params["a"] == 2
    assert builtin_method("SG").params["a"] == -1
    assert builtin_method("FD7", kappa="1/10").kappa == Fraction(1, 10)
    with pytest.raises(UnknownParameter):
        builtin_method("NM", kappa=1)


def test_validate_weight():
    good = WeightFn("G", ("t1",), lambda t1: 1 / (1 - 2 * t1), {(0,): Fraction(1), (1,): Fraction(2), (2,): Fraction(8)})
    validate_weight(good)

    bad = WeightFn("G", ("t1",), lambda t1: 1 + t1, {(0,): Fraction(1), (1,): Fraction(2)})
    with pytest.raises(WeightConditionViolated) as exc:
        validate_weight(bad)
    assert exc.value.index == (1,)


def test_validate_weight_mixed_partial():
    weight = WeightFn("G2", ("t1", "t2"), lambda t1, t2: 1 + t1 + t2 + 3 * t1 * t2, {(1, 1): Fraction(3)})
    validate_weight(weight)


def test_weight_arguments_must_be_ratios():
    with pytest.raises(ValueError):
        WeightFn("G", ("s",), lambda s: s)
    with pytest.raises(ValueError):
        WeightFn("G", ("t1",), lambda t1: t1, {(0, 0): Fraction(1)})


def test_divided_differences():
    ctx = PrecisionContext(128)
    counter = EvalCounter()
    square = _make_function("x^2")
    assert divided_difference(square, ctx.make(1), ctx.make(3), counter) == 4
    assert counter.f_evals == 2

    counter = EvalCounter()
    cube = _make_function("x^3")
    assert second_divided_difference(cube, ctx.make(2), ctx.make(1), counter) == 4
    assert (counter.f_evals, counter.df_evals) == (2, 1)

    with pytest.raises(DegenerateNodes):
        divided_difference(square, ctx.make(1), ctx.make(1), EvalCounter())


@pytest.mark.parametrize("slope", LINEAR_SLOPES)
@pytest.mark.parametrize("root", LINEAR_ROOTS)
def test_every_method_solves_a_linear_function_in_one_iteration(slope, root):
    ctx = PrecisionContext(256)
    line = _make_function(f"({slope})*(x-({root}))")
    for name in METHOD_NAMES:
        method = builtin_method(name)
        trace = iterate(method, line, ctx.make("0.5"), method.evals_per_iteration)
        assert len(trace.iterates) == 2, name
        assert abs(trace.last - ctx.make(root)) <= ctx.ulp_scale(root) * 4, name
        assert trace.tnfe_used == method.evals_per_iteration, name


@pytest.mark.parametrize("beta", SCALES)
def test_derivative_based_steps_are_scale_invariant(beta):
    ctx = PrecisionContext(256)
    f = _make_function("exp(x)-2")
    scaled = _make_function(f"({beta})*(exp(x)-2)")
    for name in DERIVATIVE_BASED_SCALED:
        method = builtin_method(name)
        a, _ = _one_step(method, f, "0.5")
        b, _ = _one_step(method, scaled, "0.5")
        assert abs(a - b) <= ctx.ulp_scale(a) * 4, name


@pytest.mark.parametrize("beta", SCALES)
def test_derivative_free_steps_are_invariant_under_coupled_scaling(beta):
    ctx = PrecisionContext(256)
    f = _make_function("exp(x)-2")
    scaled = _make_function(f"({beta})*(exp(x)-2)")
    for name in DERIVATIVE_FREE_SCALED:
        method = builtin_method(name)
        a, _ = _one_step(method, f, "0.5")
        b, _ = _one_step(method.with_params(kappa=method.kappa / Fraction(beta)), scaled, "0.5")
        assert abs(a - b) <= ctx.ulp_scale(a) * 4, name


def test_iterate_spends_the_budget():
    ctx = PrecisionContext(1024)
    f1 = builtin_function("f1", ctx)
    trace = iterate(builtin_method("FD1-M1"), f1, f1.default_x0, 12)
    assert trace.status is Status.BUDGET_EXHAUSTED
    assert trace.tnfe_used == 12
    assert len(trace.iterates) == 4
    errors = [abs(x - f1.reference_root) for x in trace.iterates]
    assert errors[0] > errors[1] > errors[2] > errors[3]


def test_iterate_rejects_a_budget_below_one_iteration():
    f = _make_function("x-1")
    with pytest.raises(ValueError):
        iterate(builtin_method("FD5"), f, PrecisionContext(128).make(3), 3)


def test_iterate_stops_on_an_exact_root():
    ctx = PrecisionContext(128)
    trace = iterate(builtin_method("NM"), _make_function("x-1"), ctx.make(3), 12)
    assert trace.status is Status.CONVERGED
    assert trace.last == 1


def test_iterate_detects_runaway_divergence():
    ctx = PrecisionContext(128)
    trace = iterate(builtin_method("NM"), _make_function("x/(1+x^2)"), ctx.make(2), 20)
    assert trace.status is Status.DIVERGENT


def test_iterate_reports_domain_errors():
    ctx = PrecisionContext(128)
    log = _make_function("ln(x)")

    trace = iterate(builtin_method("NM"), log, ctx.make(3), 12)
    assert trace.status is Status.DOMAIN_ERROR
    assert trace.iterates == [ctx.make(3)]

    trace = iterate(builtin_method("FD1-M1"), log, ctx.make(3), 12)
    assert trace.status is Status.DOMAIN_ERROR
    assert "ln" in trace.message


def test_step_family():
    ctx = PrecisionContext(128)
    method = builtin_method("FD6")
    f = _make_function("3*x-6")
    x1 = step_family("FD6", ctx.make("0.5"), f, method.params, method.weights, EvalCounter())
    assert abs(x1 - 2) <= ctx.power_of_ten(-30)

    with pytest.raises(ValueError):
        step_family("FD9", ctx.make(1), f, {}, {}, EvalCounter())


def test_step_family_reports_singular_steps():
    ctx = PrecisionContext(128)
    flat = _make_function("0*x+1")
    params = {"kappa": Fraction(1, 100), "g0": 1, "g1": 0, "g2": 0}
    with pytest.raises(SingularStep):
        step_family("FD3", ctx.make(1), flat, params, {}, EvalCounter())


def test_tnfe_is_charged_per_iteration_for_every_method_and_function(caplog):
    ctx = PrecisionContext(256)
    for function_id in SUITE_IDS:
        f = builtin_function(function_id, ctx)
        for name in METHOD_NAMES:
            method = builtin_method(name)
            trace = iterate(method, f, f.default_x0, 12)
            assert trace.tnfe_used <= 12, (name, function_id)
            assert trace.steps in (len(trace.iterates) - 1, len(trace.iterates)), (name, function_id)
            if trace.status in (Status.CONVERGED, Status.BUDGET_EXHAUSTED):
                assert trace.tnfe_used == trace.steps * method.evals_per_iteration, (name, function_id)
            if trace.status is Status.BUDGET_EXHAUSTED:
                assert trace.steps == 12 // method.evals_per_iteration, (name, function_id)
    assert not [r for r in caplog.records if "times in one iteration" in r.getMessage()]


def test_landed_iterations_are_charged_in_full():
    ctx = PrecisionContext(256)
    f1 = builtin_function("f1", ctx)
    for name in ("SG", "NT1", "SK1", "FD1-M1", "FS3-2"):
        trace = iterate(builtin_method(name), f1, f1.default_x0, 16)
        assert (trace.steps, trace.tnfe_used) == (4, 16), name


def test_residuals_contract_on_converged_traces():
    ctx = PrecisionContext(512)
    floor = ctx.power_of_ten(-(ctx.decimal_digits - 10))
    for function_id in SUITE_IDS:
        f = builtin_function(function_id, ctx)
        root = f.reference_root
        for name in METHOD_NAMES:
            trace = iterate(builtin_method(name), f, f.default_x0, 12)
            if trace.status not in (Status.CONVERGED, Status.BUDGET_EXHAUSTED):
                continue
            if abs(trace.last - root) > ctx.power_of_ten(-30):
                continue
            for n in range(len(trace.residuals) - 1):
                # below the precision floor residuals are rounding noise
                if abs(trace.iterates[n] - root) > floor:
                    assert abs(trace.residuals[n + 1]) < abs(trace.residuals[n]), (name, function_id, n)


def test_step_onto_a_plateau_is_divergent():
    ctx = PrecisionContext(256)
    f7 = builtin_function("f7", ctx)
    ev = NumericEvaluator(f7, EvalCounter(), ctx)
    assert ev.dd(ctx.make(-40), ctx.make(-41)) == 0
    assert ev.ran_off()

    trace = iterate(builtin_method("FS1"), f7, f7.default_x0, 12)
    assert trace.status is Status.DIVERGENT
    assert trace.message.startswith("step left the basin")


def test_far_sub_step_nodes_count_as_divergence():
    ctx = PrecisionContext(256)
    ev = NumericEvaluator(_make_function("x-1"), EvalCounter(), ctx)
    ev.f(ctx.make(3))
    assert not ev.ran_off()
    ev.f(ctx.make(10**9))
    assert ev.ran_off()

    with pytest.raises(DegenerateNodes):
        ev.dd(ctx.make(10**10), ctx.make(10**10))


def test_a_vanishing_derivative_stays_degenerate():
    ctx = PrecisionContext(128)
    trace = iterate(builtin_method("NM"), _make_function("x^2-1"), ctx.make(0), 12)
    assert trace.status is Status.DEGENERATE_STEP
    assert trace.tnfe_used == 2


@pytest.mark.slow
@pytest.mark.parametrize(("name", "function_id"), [("TS1", "f7"), ("TS2", "f7"), ("FS1", "f7"), ("FS4-2", "f3")])
def test_printed_divergent_cells(name, function_id):
    ctx = PrecisionContext(4096)
    f = builtin_function(function_id, ctx)
    trace = iterate(builtin_method(name), f, f.default_x0, 12)
    assert trace.status is Status.DIVERGENT, trace.message


def test_steffensen_step_is_charged_two_evaluations():
    ctx = PrecisionContext(256)
    x1, counter = _one_step(builtin_method("SM"), _make_function("exp(x)-2"), "0.5")
    assert counter.total == 2
    assert x1.context == ctx


def test_published_parameter_aliases():
    assert builtin_method("FS2", beta="1/10").kappa == Fraction(1, 10)
    assert builtin_method("FS2").with_params(beta=-1).kappa == -1
    with pytest.raises(UnknownParameter):
        builtin_method("FD5", beta=1)


def test_khattri_weights_of_higher_degree():
    f = _make_function("exp(x)-2")
    base, _ = _one_step(builtin_method("SK1"), f, "0.5")
    padded, _ = _one_step(builtin_method("SK1", m=6, l=3), f, "0.5")
    assert padded == base

    quadratic, counter = _one_step(builtin_method("SK1", m=2, a2="1/2"), f, "0.5")
    assert quadratic != base
    assert counter.total == 4


def test_reference_method_attributions():
    assert "Cordero" in builtin_method("AL").description
    assert "Khattri" in builtin_method("SK1").description
    assert "Khattri" in builtin_method("SK2M1").description
    assert builtin_method("TS1").description.startswith("Thukral")
