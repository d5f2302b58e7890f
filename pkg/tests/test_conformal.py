"""Conformal weight calculus."""
from fractions import Fraction

import pytest

from gwsym.conformal import (NonHomogeneousError, Weight, canonical_chain,
                             compose_total_weight, q_diag_weight,
                             verified_degree_table, wave_operator_degree)
from gwsym.exact import RhoRational
from gwsym.forms import SlotValue
from gwsym.interaction import (Evaluator, FormNode, Leaf, QNode, mat_is_zero,
                               mat_scale, mat_sub)
from gwsym.tensor import MINKOWSKI, rank_one


EXPECTED_TABLE = {("P", 2): -4, ("P", 3): -6, ("P", 4): -8,
                  ("Hhat", 2): -4, ("Hhat", 3): -6, ("Hhat", 4): -8}


def test_degree_table():
    assert verified_degree_table() == EXPECTED_TABLE


def test_wave_operator_degree():
    assert wave_operator_degree() == Weight(-2)


def test_q_diag_weight():
    assert q_diag_weight() == Weight(2)


def test_compose_total_weight():
    assert compose_total_weight(canonical_chain()) == Weight(-9)
    assert compose_total_weight(()) == Weight(0)
    net = compose_total_weight(("q_flowout_source", "q_flowout_target"))
    assert net == Weight(2)
    explicit = compose_total_weight((("wave_symbol", Weight(-1)),
                                     ("coefficient", None)))
    assert explicit == Weight(-9)


def test_weight_addition():
    assert Weight(-4) + Weight(-8) == Weight(-12)


def test_nested_composition_scaling(config):
    # P2(v_j, Q(P2(v3, v4))): two forms at -4 each and one causal inverse
    # at +2 compose to lambda^-6 with unscaled slot data
    lam = Fraction(3)
    ast = FormNode(("P", 2), (Leaf(2), QNode(
        FormNode(("P", 2), (Leaf(3), Leaf(4))))))
    base = Evaluator(config).eval(ast)
    scaled_metric = MINKOWSKI.scale_conformal(RhoRational.const(lam * lam))
    scaled = Evaluator(config, metric=scaled_metric).eval(ast)
    want = mat_scale(base.matrix, RhoRational.const(Fraction(1, lam ** 6)))
    assert mat_is_zero(mat_sub(scaled.matrix, want))


def test_end_to_end_minus_12(config):
    lam = Fraction(2)
    for ast in (
        FormNode(("Hhat", 4), (Leaf(1), Leaf(2), Leaf(3), Leaf(4))),
        FormNode(("P", 2), (Leaf(1), QNode(
            FormNode(("Hhat", 2), (Leaf(2), QNode(
                FormNode(("P", 2), (Leaf(3), Leaf(4)))))))))):
        base = Evaluator(config).eval(ast)
        scaled_metric = MINKOWSKI.scale_conformal(RhoRational.const(lam * lam))
        lam_inv = RhoRational.const(Fraction(1, lam))
        leaf = {i: SlotValue(rank_one(config.zeta(i)).scale(lam_inv),
                             config.zeta(i),
                             outer=((lam_inv, config.zeta(i), config.zeta(i)),))
                for i in range(1, 5)}
        scaled = Evaluator(config, metric=scaled_metric,
                           leaf_symbols=leaf).eval(ast)
        want = mat_scale(base.matrix,
                         RhoRational.const(Fraction(1, lam ** 12)))
        assert mat_is_zero(mat_sub(scaled.matrix, want))


def test_non_homogeneous_detection():
    with pytest.raises(NonHomogeneousError):
        # a deliberately broken fit: compare matrices that are not related
        # by a pure power
        from gwsym.conformal import _fit_exponent
        from gwsym.exact import ZERO, ONE
        base = ((ONE, ZERO, ZERO, ZERO),) + (((ZERO,) * 4),) * 3
        other = ((ONE + ONE, ZERO, ZERO, ONE),) + (((ZERO,) * 4),) * 3
        _fit_exponent(base, other, Fraction(2))
