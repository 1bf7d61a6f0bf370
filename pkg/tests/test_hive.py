import itertools
from fractions import Fraction

import numpy as np
import pytest

from hivecurve.errors import DimensionMismatch, NotAHive
from hivecurve.hive import (
    BoundarySpec, Hive, boundary, classify_hive, convolve, horn_feasible,
    index_set, quadratic_hive, rhombus_inequalities,
)


def F(x):
    return Fraction(x)


def random_hive(rng, n):
    """A random hive built as a max-plus convolution of n order-1 hives."""
    h = Hive(1, {idx: F(int(rng.integers(-6, 7))) for idx in index_set(1)})
    for _ in range(n - 1):
        h2 = Hive(1, {idx: F(int(rng.integers(-6, 7))) for idx in index_set(1)})
        h = convolve(h, h2)
    return h


class TestIndexSet:
    def test_n1(self):
        assert set(index_set(1)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}

    def test_counts(self):
        assert len(index_set(2)) == 6
        assert len(index_set(4)) == 15

    def test_canonical_order(self):
        idx = index_set(3)
        assert idx == sorted(idx, key=lambda t: (t[0], t[1]))

    def test_sum_invariant(self):
        assert all(i + j + k == 5 for (i, j, k) in index_set(5))


class TestRhombusInequalities:
    def test_n1_empty(self):
        assert rhombus_inequalities(1) == []

    def test_n2_one_per_family(self):
        rhs = rhombus_inequalities(2)
        assert len(rhs) == 3
        assert sorted(r.family for r in rhs) == ["i", "j", "k"]

    def test_count_formula(self):
        for n in range(7):
            assert len(rhombus_inequalities(n)) == 3 * n * (n - 1) // 2

    def test_indices_inside_grid(self):
        for n in (2, 3, 5):
            grid = set(index_set(n))
            for rh in rhombus_inequalities(n):
                for idx in rh.plus + rh.minus:
                    assert idx in grid


class TestClassify:
    def test_constant_is_tight_hive(self):
        for n in (2, 3, 4):
            res = classify_hive(Hive.constant(n))
            assert res.verdict == "hive"
            assert len(res.tight) == 3 * n * (n - 1) // 2

    def test_no_inequalities_is_vacuously_strict(self):
        assert classify_hive(Hive.constant(1)).verdict == "strict_hive"

    def test_quadratic_is_strict_with_unit_slack(self):
        for n in (2, 3, 5):
            q = quadratic_hive(n)
            assert classify_hive(q).verdict == "strict_hive"
            for rh in rhombus_inequalities(n):
                assert rh.slack(q.values) == 1

    def test_single_dip_not_hive(self):
        # dipping the k=0 edge midpoint breaks the two rhombi with (1,1,0) on
        # their plus side: the j-family at (0,2,0) and the i-family at (2,0,0)
        vals = {idx: F(0) for idx in index_set(2)}
        vals[(1, 1, 0)] = F(-1)
        res = classify_hive(Hive(2, vals))
        assert res.verdict == "not_hive"
        assert {(rh.family, rh.minus[0]) for rh in res.violated} == {
            ("j", (0, 2, 0)), ("i", (2, 0, 0))}

    def test_linear_shift_preserves_slacks(self):
        rng = np.random.default_rng(7)
        h = random_hive(rng, 3)
        shifted = h.shifted_by_linear(F(3), F(-2), F(5))
        for rh in rhombus_inequalities(3):
            assert rh.slack(h.values) == rh.slack(shifted.values)

    def test_malformed_table_rejected(self):
        with pytest.raises(DimensionMismatch):
            Hive(2, {(2, 0, 0): F(0)})


class TestBoundary:
    def test_constant(self):
        b = boundary(Hive.constant(3))
        assert b.alpha == b.beta == b.gamma == (0, 0, 0)

    def test_quadratic_n2(self):
        b = boundary(quadratic_hive(2))
        assert b.alpha == b.beta == b.gamma == (1, -1)

    def test_quadratic_general(self):
        for n in (3, 4, 6):
            b = boundary(quadratic_hive(n))
            expected = tuple(F(n - 2 * k + 1) for k in range(1, n + 1))
            assert b.alpha == b.beta == b.gamma == expected

    def test_telescoping(self):
        rng = np.random.default_rng(11)
        for n in (1, 2, 4):
            vals = {idx: Fraction(int(rng.integers(-20, 20)), int(rng.integers(1, 8)))
                    for idx in index_set(n)}
            assert boundary(Hive(n, vals)).total() == 0

    def test_hive_boundary_weakly_decreasing(self):
        rng = np.random.default_rng(13)
        for n in (2, 3, 4):
            b = boundary(random_hive(rng, n))
            for seq in (b.alpha, b.beta, b.gamma):
                assert all(seq[i] >= seq[i + 1] for i in range(len(seq) - 1))


class TestHornFeasible:
    def test_roundtrip_quadratic(self):
        b = boundary(quadratic_hive(2))
        res = horn_feasible(b)
        assert res.feasible
        assert boundary(res.witness) == b

    def test_trace_violation_infeasible(self):
        b = BoundarySpec((F(1),), (F(1),), (F(1),))
        assert not horn_feasible(b).feasible

    def test_hand_infeasible_n2(self):
        b = BoundarySpec((F(0), F(0)), (F(0), F(0)), (F(1), F(-1)))
        assert not horn_feasible(b).feasible

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            horn_feasible(BoundarySpec((F(0),), (F(0), F(0)), (F(0),)))

    def test_unsorted_input_rejected(self):
        with pytest.raises(ValueError):
            horn_feasible(BoundarySpec((F(0), F(1)), (F(0), F(-1)), (F(0), F(0))))

    def test_roundtrip_random(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            n = int(rng.integers(1, 5))
            h = random_hive(rng, n)
            b = boundary(h)
            res = horn_feasible(b)
            assert res.feasible
            w = res.witness
            assert classify_hive(w).verdict != "not_hive"
            assert boundary(w) == b


class TestConvolve:
    def test_order0_shifts(self):
        h = quadratic_hive(2)
        c = Hive(0, {(0, 0, 0): F(5)})
        out = convolve(h, c)
        assert out.values == {idx: v + 5 for idx, v in h.values.items()}

    def test_constants_add(self):
        out = convolve(Hive.constant(2, F(3)), Hive.constant(1, F(4)))
        assert out.values == {idx: F(7) for idx in index_set(3)}

    def test_order1_pair(self):
        a, b, c = F(1), F(5), F(2)
        ap, bp, cp = F(4), F(0), F(3)
        h1 = Hive(1, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})
        h2 = Hive(1, {(1, 0, 0): ap, (0, 1, 0): bp, (0, 0, 1): cp})
        out = convolve(h1, h2)
        assert out.values[(2, 0, 0)] == a + ap
        assert out.values[(0, 2, 0)] == b + bp
        assert out.values[(0, 0, 2)] == c + cp
        assert out.values[(1, 1, 0)] == max(a + bp, b + ap)
        assert out.values[(1, 0, 1)] == max(a + cp, c + ap)
        assert out.values[(0, 1, 1)] == max(b + cp, c + bp)

    def test_result_is_hive(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            h1 = random_hive(rng, int(rng.integers(1, 4)))
            h2 = random_hive(rng, int(rng.integers(1, 4)))
            assert classify_hive(convolve(h1, h2)).verdict != "not_hive"

    def test_rejects_non_hive(self):
        vals = {idx: F(0) for idx in index_set(2)}
        vals[(1, 1, 0)] = F(-1)
        with pytest.raises(NotAHive):
            convolve(Hive(2, vals), Hive.constant(1))

    def test_commutative_associative(self):
        rng = np.random.default_rng(5)
        h1, h2, h3 = (random_hive(rng, 2) for _ in range(3))
        assert convolve(h1, h2).values == convolve(h2, h1).values
        lhs = convolve(convolve(h1, h2), h3)
        rhs = convolve(h1, convolve(h2, h3))
        assert lhs.values == rhs.values

    def test_boundary_merges_sorted(self):
        rng = np.random.default_rng(9)
        for _ in range(8):
            n1, n2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            h1, h2 = random_hive(rng, n1), random_hive(rng, n2)
            b = boundary(convolve(h1, h2))
            b1, b2 = boundary(h1), boundary(h2)
            for got, p, q in zip(b, b1, b2):
                assert list(got) == sorted(itertools.chain(p, q), reverse=True)


class TestHornEdgeCases:
    def test_constant_boundary_feasible(self):
        b = boundary(Hive.constant(3))
        res = horn_feasible(b)
        assert res.feasible
        assert boundary(res.witness) == b

    def test_scaled_hand_infeasible(self):
        eps = F(1) / 7
        b = BoundarySpec((F(0), F(0)), (F(0), F(0)), (eps, -eps))
        assert not horn_feasible(b).feasible


class TestHornAgainstIntervalOracle:
    """Independent feasibility oracle for n=3: the single interior value
    must fit between the max lower and min upper rhombus bound."""

    @staticmethod
    def oracle_n3(b):
        from hivecurve.hive import boundary_values, rhombus_inequalities
        if b.total() != 0:
            return False
        fixed = boundary_values(b)
        lower, upper = [], []
        for rh in rhombus_inequalities(3):
            coef = 0
            rest = Fraction(0)
            for idx, sign in ((rh.plus[0], 1), (rh.plus[1], 1),
                              (rh.minus[0], -1), (rh.minus[1], -1)):
                if idx == (1, 1, 1):
                    coef += sign
                else:
                    rest += sign * fixed[idx]
            if coef == 1:
                lower.append(-rest)
            elif coef == -1:
                upper.append(rest)
            else:
                if rest < 0:
                    return False
        return (not lower) or (not upper) or max(lower) <= min(upper)

    def test_simplex_matches_interval_oracle(self):
        rng = np.random.default_rng(77)
        feasible_seen = infeasible_seen = 0
        for trial in range(200):
            if trial % 2 == 0:
                b = boundary(random_hive(rng, 3))
            else:
                def dec():
                    steps = sorted((Fraction(int(rng.integers(-8, 9)),
                                             int(rng.integers(1, 4)))
                                    for _ in range(3)), reverse=True)
                    return steps
                a, bb, g = dec(), dec(), dec()
                total = sum(a) + sum(bb) + sum(g)
                g = [x - total / 3 for x in g]
                b = BoundarySpec(tuple(a), tuple(bb), tuple(g))
            want = self.oracle_n3(b)
            got = horn_feasible(b).feasible
            assert got == want, b
            feasible_seen += want
            infeasible_seen += not want
        assert feasible_seen > 20 and infeasible_seen > 20
