"""Multi-step iterative methods and the engine that runs them."""

from rootlab.schemes.core import (
    Evaluator,
    IterationTrace,
    Kind,
    MethodScheme,
    NumericEvaluator,
    Status,
    WeightFn,
    divided_difference,
    iterate,
    second_divided_difference,
    validate_weight,
)
from rootlab.schemes.families import FAMILY_STEPPERS, step_family
from rootlab.schemes.registry import METHOD_NAMES, builtin_method, canonical_name

__all__ = [
    "Evaluator",
    "FAMILY_STEPPERS",
    "IterationTrace",
    "Kind",
    "METHOD_NAMES",
    "MethodScheme",
    "NumericEvaluator",
    "Status",
    "WeightFn",
    "builtin_method",
    "canonical_name",
    "divided_difference",
    "iterate",
    "second_divided_difference",
    "step_family",
    "validate_weight",
]
