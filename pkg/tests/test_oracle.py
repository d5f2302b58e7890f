"""Independent verification paths: the jet iteration and float evaluation."""
from fractions import Fraction

import numpy as np
import pytest

from gwsym.interaction import (FormNode, Leaf, QNode, eval_I_cancellation,
                               eval_term, mat_eval_at, total_symbol)
from gwsym.oracle import (GaussianRational, OracleUnsupported,
                          cancellation_scale, eval_ast_float,
                          interaction_total_jet, max_rel_diff, numeric_oracle)
from gwsym.forms import SlotValue
from gwsym.tensor import Sym2T, rank_one


class TestGaussianRational:
    def test_arithmetic(self):
        i = GaussianRational(Fraction(0), Fraction(1))
        one = GaussianRational.of(1)
        assert i * i == -one
        assert (one / i) == -i
        assert i.times_i() == -one
        x = GaussianRational(Fraction(3), Fraction(-2))
        assert x * (one / x) == one

    def test_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            GaussianRational.of(1) / GaussianRational.of(0)


class TestExactJet:
    def test_total_matches_enumerated_engine(self, config):
        tot = total_symbol(config)
        for rho in (Fraction(2), Fraction(3), Fraction(5, 2)):
            exact_at = mat_eval_at(tot["matrix"], rho)
            jet = interaction_total_jet(config, rho, exact=True)
            for i in range(4):
                for j in range(4):
                    assert jet[i][j].im == 0
                    assert jet[i][j].re == exact_at[i][j]

    def test_total_vanishes_for_rank_one_polarizations(self, config):
        jet = interaction_total_jet(config, Fraction(2), exact=True)
        assert all(x.is_zero() for row in jet for x in row)

    def test_transverse_traceless_total_is_nonzero(self, config):
        def m(entries):
            rows = [[0] * 4 for _ in range(4)]
            for i, j, v in entries:
                rows[i][j] = v
                rows[j][i] = v
            return rows

        tt = {1: m([(1, 1, 1), (3, 3, -1)]),
              2: m([(1, 1, 1), (2, 2, -1)]),
              3: m([(2, 2, 1), (3, 3, -1)]),
              4: m([(2, 3, 1)])}
        jet = interaction_total_jet(config, Fraction(2), exact=True,
                                    leaf_symbols=tt)
        assert any(not x.is_zero() for row in jet for x in row)
        assert all(x.im == 0 for row in jet for x in row)

    def test_gauge_slot_annihilation_pattern(self, config):
        """The total vanishes iff at least two slots are pure gauge.

        A pure-gauge polarization is sym(zeta (x) w); the published choice
        (w = zeta/2 in every slot) is the all-gauge corner.  With
        transverse-traceless data elsewhere, one gauge slot leaves the total
        nonzero, two gauge slots kill it exactly.
        """
        rho = Fraction(2)

        def m(entries):
            rows = [[Fraction(0)] * 4 for _ in range(4)]
            for i, j, v in entries:
                rows[i][j] = rows[j][i] = Fraction(v)
            return rows

        tt = {1: m([(1, 1, 1), (3, 3, -1)]),
              2: m([(1, 1, 1), (2, 2, -1)]),
              3: m([(2, 2, 1), (3, 3, -1)]),
              4: m([(2, 3, 1)])}

        def gauge(i, w):
            z = [Fraction(c.eval_at(rho)) for c in config.zeta(i)]
            w = [Fraction(x) for x in w]
            return [[z[a] * w[b] + z[b] * w[a] for b in range(4)]
                    for a in range(4)]

        def nonzero(leaf):
            mat = interaction_total_jet(config, rho, exact=True,
                                        leaf_symbols=leaf)
            return any(not x.is_zero() for row in mat for x in row)

        assert nonzero(tt)
        one = dict(tt)
        one[2] = gauge(2, (3, -1, 2, 5))
        assert nonzero(one)
        two = dict(one)
        two[3] = gauge(3, (1, 1, 1, 1))
        assert not nonzero(two)
        other_two = dict(tt)
        other_two[3] = gauge(3, (1, 2, 0, 1))
        other_two[4] = gauge(4, (0, 1, 1, 3))
        assert not nonzero(other_two)

    def test_override_agreement_between_paths(self, config):
        """Engine with overridden leaf symbols equals the jet iteration."""
        def m(entries):
            rows = [[0] * 4 for _ in range(4)]
            for i, j, v in entries:
                rows[i][j] = v
                rows[j][i] = v
            return rows

        tt_raw = {1: m([(1, 1, 1), (3, 3, -1)]),
                  2: m([(1, 1, 1), (2, 2, -1)]),
                  3: m([(2, 2, 1), (3, 3, -1)]),
                  4: m([(2, 3, 1)])}
        overrides = {i: SlotValue(Sym2T(tt_raw[i]), config.zeta(i))
                     for i in tt_raw}
        from gwsym.interaction import (Evaluator, enumerate_all, mat_add,
                                       mat_scale, ZERO_MAT)
        from gwsym.exact import RhoRational
        ev = Evaluator(config, leaf_symbols=overrides)
        total = ZERO_MAT
        for term in enumerate_all():
            total = mat_add(total, mat_scale(
                ev.eval(term.ast).matrix, RhoRational.const(term.sign)))
        rho = Fraction(2)
        exact_at = mat_eval_at(total, rho)
        jet = interaction_total_jet(config, rho, exact=True,
                                    leaf_symbols=tt_raw)
        for i in range(4):
            for j in range(4):
                assert jet[i][j].im == 0
                assert jet[i][j].re == exact_at[i][j]


class TestFloatOracle:
    def test_leaf(self, config):
        got = numeric_oracle(Leaf(1), Fraction(2), config)
        want = mat_eval_at(rank_one(config.zeta(1)).m, Fraction(2))
        assert np.allclose(np.asarray(got, dtype=np.complex128),
                           np.array(want, dtype=float))

    def test_chain_terms_dual_path(self, config):
        res = eval_I_cancellation(config)
        for rho in (Fraction(2), Fraction(5, 2)):
            for (a, b, c), value in res["terms"].items():
                ast = FormNode(("P", 2), (Leaf(a), QNode(
                    FormNode(("P", 2), (Leaf(b), QNode(
                        FormNode(("P", 2), (Leaf(c), Leaf(4)))))))))
                got = numeric_oracle(ast, rho, config)
                err = max_rel_diff(mat_eval_at(value.matrix, rho), got)
                assert err <= 1e-9

    def test_hhat2_term_dual_path(self, config):
        ast = FormNode(("Hhat", 2), (Leaf(1), QNode(
            FormNode(("P", 2), (Leaf(2), QNode(
                FormNode(("P", 2), (Leaf(3), Leaf(4)))))))))
        rho = Fraction(2)
        exact = eval_term(ast, config)
        got = numeric_oracle(ast, rho, config)
        err = max_rel_diff(mat_eval_at(exact.matrix, rho), got)
        assert err <= 1e-9

    def test_family_members_dual_path(self, config):
        """Every top-order family member float-checks at 1e-9.

        This independently validates the per-item values, including the two
        semilinear values and the subcase where the engine's exact result is
        half the published constant: the float path hand-codes the explicit
        quadratic semilinear formula with numpy contractions.
        """
        from gwsym.interaction import classify_rho40_terms, shared_evaluator
        ev = shared_evaluator(config)
        cls = classify_rho40_terms(config)
        rho = Fraction(2)
        for n, members in cls["families"].items():
            for term, value, order in members:
                got = numeric_oracle(term.ast, rho, config)
                err = max_rel_diff(mat_eval_at(value.matrix, rho), got)
                assert err <= 1e-9, (n, term.perm, term.forms)

    def test_float_total_within_cancellation_noise(self, config):
        tot = total_symbol(config)
        for rho in (Fraction(2), Fraction(3)):
            exact_at = mat_eval_at(tot["matrix"], rho)
            got = numeric_oracle("total", rho, config)
            scale = cancellation_scale(config, rho)
            assert max_rel_diff(exact_at, got, floor=scale) <= 1e-9

    def test_unsupported(self, config):
        with pytest.raises(OracleUnsupported):
            numeric_oracle("nonsense", Fraction(2), config)
        ast = FormNode(("Hhat", 4), (Leaf(1), Leaf(2), Leaf(3), Leaf(4)))
        with pytest.raises(OracleUnsupported):
            eval_ast_float(ast, config, Fraction(2))
