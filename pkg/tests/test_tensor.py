"""Tensor core: pairings, sandwiches, outer products, exact metric inverse."""
import random
from fractions import Fraction

import pytest

from gwsym.exact import RhoRational, parse_rho_rational
from gwsym.tensor import (CoVec4, MINKOWSKI, Metric4, Sym2T, ZERO_SYM2,
                          chain_sandwich, det4, double_sandwich, norm_sq,
                          pairing, rank_one, sandwich, sym_outer)


def rr(text):
    return parse_rho_rational(text)


PAIRING_TABLE = {
    (1, 2): "1", (1, 3): "-1/(2*rho^10)", (1, 4): "-rho^10",
    (2, 3): "1/(2*rho^10)", (2, 4): "rho^10", (3, 4): "-1",
}


def test_pairing_table(config):
    for (i, j), text in PAIRING_TABLE.items():
        assert pairing(MINKOWSKI, config.zeta(i), config.zeta(j)) == rr(text)


def test_single_covectors_are_null(config):
    for i in range(1, 5):
        assert norm_sq(MINKOWSKI, config.zeta(i)).is_zero()


def test_triple_norms(config):
    norms = config.triple_norm_table()
    assert norms[(1, 2, 3)] == rr("2")
    assert norms[(1, 2, 4)] == rr("2")
    # leading parts 2 rho^10 - 2 and -2 rho^10 - 2 with rho^-10 tails
    n234 = norms[(2, 3, 4)]
    assert (n234 - rr("2*rho^10 - 2")).infinity_degree == -10
    n134 = norms[(1, 3, 4)]
    assert (n134 - rr("-2*rho^10 - 2")).infinity_degree == -10


def test_sandwich_examples(config):
    z3, z4, z1 = config.zeta(3), config.zeta(4), config.zeta(1)
    assert sandwich(MINKOWSKI, rank_one(z3), z4) == rr("1")
    assert sandwich(MINKOWSKI, rank_one(z1), z4) == rr("rho^20")
    assert sandwich(MINKOWSKI, ZERO_SYM2, z4).is_zero()


def test_double_sandwich_factorizes(config):
    # rank-one arguments collapse to a product of three pairings
    z1, z2, z4 = config.zeta(1), config.zeta(2), config.zeta(4)
    got = double_sandwich(MINKOWSKI, rank_one(z1), rank_one(z2), z4)
    assert got == rr("-rho^20")
    expect = (pairing(MINKOWSKI, z1, z4) * pairing(MINKOWSKI, z2, z4)
              * pairing(MINKOWSKI, z1, z2))
    assert got == expect


def test_double_sandwich_matches_matrix_product(config):
    # brute-force triple matrix product oracle
    z1 = config.zeta(1)
    s1, s2 = rank_one(config.zeta(3)), rank_one(config.zeta(4))
    hinv = MINKOWSKI.inv
    mats = [hinv, s1.m, hinv, s2.m, hinv]
    prod = mats[0]
    for m in mats[1:]:
        prod = tuple(tuple(sum((prod[i][k] * m[k][j] for k in range(4)),
                               RhoRational.const(0)) for j in range(4))
                     for i in range(4))
    brute = RhoRational.const(0)
    for p in range(4):
        for q in range(4):
            brute = brute + prod[p][q] * z1[p] * z1[q]
    assert double_sandwich(MINKOWSKI, s1, s2, z1) == brute


def test_sym_outer(config):
    z = config.zeta(1)
    doubled = sym_outer(z, z)
    assert doubled == rank_one(z).scale(2)
    a14 = sym_outer(z, config.zeta(4))
    assert a14.max_infinity_degree() == 10
    e0 = CoVec4((1, 0, 0, 0))
    e1 = CoVec4((0, 1, 0, 0))
    m = sym_outer(e0, e1)
    assert m[0][1] == RhoRational.const(1) and m[1][0] == RhoRational.const(1)
    assert sum(1 for i in range(4) for j in range(4)
               if not m[i][j].is_zero()) == 2


def test_metric_inverse_is_exact():
    m = Metric4(((-2, 1, 0, 0), (1, 3, 0, 0), (0, 0, 1, 0), (0, 0, 0, 5)))
    prod = [[sum((m[i][k] * m.inv[k][j] for k in range(4)),
                 RhoRational.const(0)) for j in range(4)] for i in range(4)]
    for i in range(4):
        for j in range(4):
            want = RhoRational.const(1 if i == j else 0)
            assert prod[i][j] == want


def test_singular_metric_rejected():
    with pytest.raises(ValueError):
        Metric4(((0, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))


def test_sym2t_rejects_asymmetric():
    rows = [[0] * 4 for _ in range(4)]
    rows[0][1] = 1
    with pytest.raises(ValueError):
        Sym2T(rows)


def _random_covec(rng):
    return CoVec4(tuple(RhoRational.const(Fraction(rng.randint(-4, 4),
                                                   rng.randint(1, 3)))
                        for _ in range(4)))


def test_pairing_symmetric_bilinear():
    rng = random.Random(3)
    for _ in range(20):
        a, b, c = (_random_covec(rng) for _ in range(3))
        s = RhoRational.const(Fraction(rng.randint(-3, 3), 2))
        assert pairing(MINKOWSKI, a, b) == pairing(MINKOWSKI, b, a)
        lhs = pairing(MINKOWSKI, a.scale(s) + c, b)
        rhs = s * pairing(MINKOWSKI, a, b) + pairing(MINKOWSKI, c, b)
        assert lhs == rhs


def test_rank_one_sandwich_identity():
    rng = random.Random(5)
    for _ in range(20):
        a, xi = _random_covec(rng), _random_covec(rng)
        p = pairing(MINKOWSKI, a, xi)
        assert sandwich(MINKOWSKI, rank_one(a), xi) == p * p
        assert sandwich(MINKOWSKI, sym_outer(a, a), xi) == 2 * p * p


def test_chain_sandwich_generalizes(config):
    z4 = config.zeta(4)
    s = rank_one(config.zeta(3))
    assert chain_sandwich(MINKOWSKI, [s], z4) == sandwich(MINKOWSKI, s, z4)


def test_det4(config):
    d = det4(tuple(z.c for z in config.zetas))
    assert not d.is_zero()
    rows = [list(z.c) for z in config.zetas]
    rows[3] = list(config.zeta(1).c)
    assert det4(tuple(tuple(r) for r in rows)).is_zero()
