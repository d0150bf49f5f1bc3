"""Order certification and proof reports."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import sympy

from rootlab.errors import TruncationTooLow
from rootlab.orderlab.poly import Poly
from rootlab.orderlab.series import Series
from rootlab.orderlab.symbolic import FAMILIES, condition_set, error_series
from rootlab.schemes.registry import builtin_method

logger = logging.getLogger(__name__)

MAX_TRUNCATION = 12
FACTOR_TERM_LIMIT = 60


@dataclass(frozen=True)
class OrderCertificate:
    target: str
    conditions: str
    claimed_order: int | None
    order: int
    leading: Poly
    truncation: int
    vanishing: tuple[int, ...]
    series: Series

    @property
    def certified(self) -> bool:
        return self.claimed_order is None or self.order >= self.claimed_order


def claimed_order(target: str, conditions: str = "base") -> int | None:
    key = target.strip().upper()
    if key in FAMILIES:
        return condition_set(key, conditions).claimed_order
    return builtin_method(target).claimed_order


def verify_order(
    target: str, conditions: str = "base", truncation: int | None = None, extra_terms: int = 0
) -> OrderCertificate:
    """Valuation and leading coefficient of the error series.

    Every coefficient below the returned order is the exact zero polynomial.

    Raises:
        TruncationTooLow: No nonzero coefficient is known at this truncation.
    """
    series = error_series(target, conditions, truncation, extra_terms)
    order = series.valuation()
    if order >= series.precision:
        raise TruncationTooLow(known_through=series.precision - 1, truncation=series.truncation)
    key = target.strip().upper()
    return OrderCertificate(
        target=key if key in FAMILIES else builtin_method(target).name,
        conditions=conditions if key in FAMILIES else "registered",
        claimed_order=claimed_order(target, conditions),
        order=order,
        leading=series[order],
        truncation=series.truncation,
        vanishing=tuple(range(order)),
        series=series,
    )


def certify(
    target: str,
    conditions: str = "base",
    truncation: int | None = None,
    max_truncation: int = MAX_TRUNCATION,
) -> OrderCertificate:
    """:func:`verify_order`, raising the truncation until the order is decided."""
    while True:
        try:
            certificate = verify_order(target, conditions, truncation)
            break
        except TruncationTooLow as exc:
            if exc.truncation >= max_truncation:
                raise
            logger.warning("%s/%s: %s; retrying at %d", target, conditions, exc, exc.truncation + 1)
            truncation = exc.truncation + 1
    logger.info(
        "%s/%s: order %d (claimed %s)",
        certificate.target,
        certificate.conditions,
        certificate.order,
        certificate.claimed_order,
    )
    return certificate


def render_leading(leading: Poly) -> str:
    """Leading coefficient with nu written back as 1 - kappa*c1, factored when small."""
    expression = leading.to_sympy()
    nu, kappa, c1 = sympy.symbols("nu kappa c1")
    if expression.has(nu):
        expression = sympy.expand(expression.subs(nu, 1 - kappa * c1))
    if len(leading) <= FACTOR_TERM_LIMIT:
        expression = sympy.factor(expression)
    return str(expression)


def proof_report(certificate: OrderCertificate) -> str:
    lines = [f"{certificate.target} [{certificate.conditions}]"]
    key = certificate.target
    if key in FAMILIES:
        described = condition_set(key, certificate.conditions).describe()
        lines.append("conditions:")
        lines.extend(f"  {line}" for line in described)
    claimed = "-" if certificate.claimed_order is None else str(certificate.claimed_order)
    lines.append(f"claimed order:   {claimed}")
    lines.append(f"certified order: {certificate.order}")
    if certificate.vanishing:
        lines.append(f"vanishing:       e^0 .. e^{certificate.vanishing[-1]}")
    lines.append(f"truncation:      {certificate.truncation}")
    lines.append(f"leading e^{certificate.order}: {render_leading(certificate.leading)}")
    lines.append("status: " + ("certified" if certificate.certified else "NOT certified"))
    return "\n".join(lines)


def certificate_record(certificate: OrderCertificate) -> dict:
    return {
        "target": certificate.target,
        "conditions": certificate.conditions,
        "claimed_order": certificate.claimed_order,
        "order": certificate.order,
        "certified": certificate.certified,
        "truncation": certificate.truncation,
        "leading": str(certificate.leading),
    }
