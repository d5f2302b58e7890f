"""Conformal weight calculus for the interaction coefficient forms.

A weight w stands for the factor lambda^w picked up when the background
metric is rescaled by lambda^2 at the interaction point.  Form weights are
verified by exact evaluation at two rational sample factors; the transport
rules for the causal inverse are recorded constants, and chains compose
additively.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import RhoRational
from .forms import SlotValue, symbol_of_form
from .interaction import form_family, mat_is_zero, mat_scale, mat_sub
from .nullcone import standard_config
from .tensor import MINKOWSKI


@dataclass(frozen=True)
class Weight:
    """Integer conformal weight; composes additively."""

    value: int

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.value + other.value)


class NonHomogeneousError(ArithmeticError):
    pass


def _fit_exponent(base_matrix, scaled_matrix, lam: Fraction) -> int:
    """The integer w with scaled == lam^w * base, else raises."""
    for w in range(-16, 17):
        factor = RhoRational.const(lam ** w)
        if mat_is_zero(mat_sub(scaled_matrix, mat_scale(base_matrix, factor))):
            return w
    raise NonHomogeneousError("ratio of evaluations is not a pure power")


def form_scaling_degree(form_key) -> Weight:
    """Verified weight of one coefficient form under metric rescaling.

    Evaluates the form twice (background metric and its rescaling by
    lambda^2) on fixed slot data, for two different rational lambda, and
    fits the exact integer exponent.
    """
    form = form_family()[form_key]
    config = standard_config()
    assignment = {s: SlotValue.wave(config.zeta(s))
                  for s in range(1, form.arity + 1)}
    base, _ = symbol_of_form(form, assignment, MINKOWSKI)
    exponents = set()
    for lam in (Fraction(2), Fraction(3)):
        scaled_metric = MINKOWSKI.scale_conformal(RhoRational.const(lam * lam))
        scaled, _ = symbol_of_form(form, assignment, scaled_metric)
        exponents.add(_fit_exponent(base, scaled, lam))
    if len(exponents) != 1:
        raise NonHomogeneousError(f"exponent fit disagrees: {exponents}")
    return Weight(exponents.pop())


def wave_operator_degree() -> Weight:
    """Weight of the principal wave-operator coefficient (one inverse metric)."""
    from .tensor import norm_sq
    config = standard_config()
    xi = config.subset_sum((1, 2, 3))
    base = norm_sq(MINKOWSKI, xi)
    exponents = set()
    for lam in (Fraction(2), Fraction(3)):
        scaled = norm_sq(MINKOWSKI.scale_conformal(RhoRational.const(lam * lam)), xi)
        ratio = scaled / base
        for w in range(-8, 9):
            if ratio == RhoRational.const(lam ** w):
                exponents.add(w)
                break
    if exponents != {-2}:
        raise NonHomogeneousError(f"wave operator scaling came out as {exponents}")
    return Weight(-2)


def q_diag_weight() -> Weight:
    """Transport weight of the causal inverse on the diagonal: +2.

    Consistency: the principal symbol of the second-order operator is the
    squared covector norm, which scales by lambda^-2; its inverse scales by
    lambda^+2.  The derived check recomputes that by direct evaluation.
    """
    assert wave_operator_degree().value == -2
    return Weight(2)


#: Transport rules along the flow-out, recorded as constants of the calculus.
CHAIN_RULES = {
    "wave_symbol": Weight(-1),
    "coefficient": Weight(-8),
    "q_flowout_source": Weight(3),
    "q_flowout_target": Weight(-1),
    "q_flowout_target_normalized": Weight(0),  # unit factor on the data region
}


def compose_total_weight(chain) -> Weight:
    """Sum of the weights of a chain of (kind, Weight | None) factors.

    When the weight is omitted the recorded rule constant for the kind is
    used.  The canonical chain of four wave symbols, the coefficient forms
    and the flow-out transport composes to -9.
    """
    total = Weight(0)
    for entry in chain:
        if isinstance(entry, str):
            kind, weight = entry, None
        else:
            kind, weight = entry
        if weight is None:
            weight = CHAIN_RULES[kind]
        total = total + weight
    return total


def canonical_chain():
    """Four waves, the coefficient scaling, and the flow-out transport."""
    return ("wave_symbol", "wave_symbol", "wave_symbol", "wave_symbol",
            "coefficient", "q_flowout_source", "q_flowout_target_normalized")


def verified_degree_table() -> dict:
    """All six form weights, each verified by exact evaluation."""
    return {key: form_scaling_degree(key).value
            for key in (("P", 2), ("P", 3), ("P", 4),
                        ("Hhat", 2), ("Hhat", 3), ("Hhat", 4))}
