"""Gauge and conservation constraint residuals and solution dimensions."""
import random
from fractions import Fraction

import pytest

from gwsym.exact import RhoRational, parse_rho_rational
from gwsym.gauge import (ConstraintKind, constraint_space_dim,
                         conservation_residual, harmonic_gauge_residual,
                         maxwell_conservation_residual,
                         scalar_conservation_residual)
from gwsym.tensor import (CoVec4, MINKOWSKI, Sym2T, ZERO_SYM2, pairing,
                          rank_one, sym_outer)


def rr(text):
    return parse_rho_rational(text)


IDENTITY = Sym2T(((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))


def _is_zero_covec(v):
    return all(x.is_zero() for x in v)


def test_polarizations_satisfy_both_constraints(config):
    for i in range(1, 5):
        z = config.zeta(i)
        a = rank_one(z)
        assert _is_zero_covec(harmonic_gauge_residual(MINKOWSKI, z, a))
        assert _is_zero_covec(conservation_residual(MINKOWSKI, z, a))


def test_harmonic_gauge_identity_example(config):
    # component 0 equals xi_0 + (1/2) xi_0 * 2 = 2 for the first covector
    res = harmonic_gauge_residual(MINKOWSKI, config.zeta(1), IDENTITY)
    assert res[0] == rr("2")
    assert not _is_zero_covec(res)


def test_harmonic_gauge_zero_tensor(config):
    res = harmonic_gauge_residual(MINKOWSKI, config.zeta(1), ZERO_SYM2)
    assert _is_zero_covec(res)


def test_conservation_examples(config):
    z1, z2 = config.zeta(1), config.zeta(2)
    res = conservation_residual(MINKOWSKI, z1, rank_one(z2))
    # h(z1, z2) = 1, so the residual is z2 itself
    assert res == z2
    # orthogonal outer product gives zero
    v = CoVec4((0, 0, 1, 0))
    w = CoVec4((0, 0, 0, 1))
    eta = CoVec4((1, 1, 0, 0))
    assert pairing(MINKOWSKI, eta, v).is_zero()
    assert _is_zero_covec(conservation_residual(MINKOWSKI, eta,
                                                sym_outer(v, w)))
    assert _is_zero_covec(conservation_residual(MINKOWSKI, eta, ZERO_SYM2))


def test_residual_linearity(config):
    rng = random.Random(12)

    def rand_sym():
        rows = [[0] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(i, 4):
                rows[i][j] = rows[j][i] = Fraction(rng.randint(-5, 5), 2)
        return Sym2T(rows)

    z = config.zeta(2)
    for residual in (conservation_residual, harmonic_gauge_residual):
        a, b = rand_sym(), rand_sym()
        lhs = residual(MINKOWSKI, z, a + b)
        rhs = residual(MINKOWSKI, z, a) + residual(MINKOWSKI, z, b)
        assert lhs == rhs


def test_scalar_conservation(config):
    z1, z2 = config.zeta(1), config.zeta(2)
    # B = -1/2 cancels the tensor part componentwise
    res = scalar_conservation_residual(MINKOWSKI, z1, rank_one(z2),
                                       [RhoRational.const(Fraction(-1, 2))],
                                       [z2])
    assert _is_zero_covec(res)
    # zero tensor part: the field part alone
    e0 = CoVec4((1, 0, 0, 0))
    res = scalar_conservation_residual(MINKOWSKI, z1, ZERO_SYM2,
                                       [RhoRational.const(1)], [e0])
    assert res == e0
    # conserved tensor with vanishing fields
    res = scalar_conservation_residual(MINKOWSKI, z1, rank_one(z1),
                                       [RhoRational.const(0)], [e0])
    assert _is_zero_covec(res)
    with pytest.raises(ValueError):
        scalar_conservation_residual(MINKOWSKI, z1, ZERO_SYM2, [1], [e0, e0])
    with pytest.raises(ValueError):
        scalar_conservation_residual(MINKOWSKI, z1, ZERO_SYM2, [], [])


def test_maxwell_conservation(config):
    z1, z2 = config.zeta(1), config.zeta(2)
    assert maxwell_conservation_residual(z1, z2) == rr("-1")
    b = CoVec4((0, 1, 0, 0))
    eta = CoVec4((0, 0, 1, 0))
    assert maxwell_conservation_residual(eta, b).is_zero()
    assert maxwell_conservation_residual(z1, CoVec4((0, 0, 0, 0))).is_zero()


def random_null_covector(rng):
    """Light-like covector with rational or rho-monomial components.

    Spatial part from the Pythagorean parametrization (a^2 - b^2, 2ab, 0)
    with norm a^2 + b^2, shuffled over axes and scaled by a rho power.
    """
    a = Fraction(rng.randint(1, 6), rng.randint(1, 3))
    b = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
    if a == abs(b):
        b += 1
    spatial = [a * a - b * b, 2 * a * b, Fraction(0)]
    rng.shuffle(spatial)
    t = a * a + b * b
    scale = RhoRational.rho_power(10 * rng.randint(-1, 1),
                                  Fraction(rng.choice((1, -1))
                                           * rng.randint(1, 3)))
    return CoVec4(tuple(scale * RhoRational.const(x)
                        for x in (t, *spatial)))


def test_dimension_six_for_randomized_null_covectors():
    rng = random.Random(77)
    for _ in range(100):
        cov = random_null_covector(rng)
        from gwsym.tensor import norm_sq
        assert norm_sq(MINKOWSKI, cov).is_zero()
        for kind in (ConstraintKind.ConservationLaw,
                     ConstraintKind.HarmonicGauge):
            res = constraint_space_dim(kind, MINKOWSKI, cov)
            assert res.dimension == 6 and res.rank == 4


def test_dimension_values(config):
    for kind in (ConstraintKind.ConservationLaw, ConstraintKind.HarmonicGauge,
                 ConstraintKind.ScalarConservation):
        res = constraint_space_dim(kind, MINKOWSKI, config.zeta(1))
        assert res.dimension == 6 and res.fiber_dimension == 10
    res = constraint_space_dim(ConstraintKind.MaxwellConservation, MINKOWSKI,
                               config.zeta(1))
    assert res.dimension == 3 and res.fiber_dimension == 4
    degenerate = constraint_space_dim(ConstraintKind.ConservationLaw,
                                      MINKOWSKI, CoVec4((0, 0, 0, 0)))
    assert degenerate.dimension == 10 and degenerate.degenerate
    degenerate = constraint_space_dim(ConstraintKind.MaxwellConservation,
                                      MINKOWSKI, CoVec4((0, 0, 0, 0)))
    assert degenerate.dimension == 4 and degenerate.degenerate
