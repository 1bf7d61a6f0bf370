import math
from fractions import Fraction

import numpy as np
import pytest

from hivecurve.asymptotics import (
    LiftedFamily, RMatrixFamily, RonkinSpec, boundary_asymptotics,
    boundary_exponent_view, boundary_slot_bounds, direct_sum_check,
    empirical_exponents, half_log_boundary, hive4_check, instantiate,
    main_theorem_sweep, realize_hive, ronkin_boundary_check,
    ronkin_coefficient, ronkin_edge_marginal, ronkin_value,
)
from hivecurve.errors import CornerCoefficientZero, NotAHive
from hivecurve.hive import Hive, boundary, classify_hive, index_set, quadratic_hive
from hivecurve.pencil import PencilTriple, TernaryForm, pencil_det

from util import random_pd


def q_family(n, c=1):
    q = quadratic_hive(n)
    return LiftedFamily(n, {idx: Fraction(c) for idx in index_set(n)}, dict(q.values))


def neg_q_family(n):
    q = quadratic_hive(n)
    return LiftedFamily(n, {idx: Fraction(1) for idx in index_set(n)},
                        {idx: -v for idx, v in q.values.items()})


def cdiag(*vals):
    return np.diag(np.array(vals, dtype=np.complex128))


class TestInstantiate:
    def test_t_one(self):
        fam = q_family(2, c=3)
        f = instantiate(fam, 1.0)
        assert all(v == 3.0 for v in f.coeffs.values())

    def test_quadratic_at_ten(self):
        f = instantiate(q_family(2), 10.0)
        assert f.coeffs[(1, 1, 0)] == pytest.approx(10.0)
        assert f.coeffs[(2, 0, 0)] == pytest.approx(1.0)

    def test_zero_exponents_constant(self):
        fam = LiftedFamily(1, {idx: Fraction(2) for idx in index_set(1)},
                           {idx: Fraction(0) for idx in index_set(1)})
        assert instantiate(fam, 123.0).coeffs == instantiate(fam, 7.0).coeffs

    def test_rescale_reports_scale(self):
        fam = q_family(6)
        scaled, scale = fam.rescaled(1e300)
        assert scale > 1
        assert scaled.exponent_range() * 300 <= fam.exponent_range() * 300 / float(scale) + 1


class TestRealizeHive:
    def test_strict_identity(self):
        q = quadratic_hive(2)
        fam, drift = realize_hive(q, 0)
        assert fam.exponent == q.values
        assert all(x == 0 for side in drift for x in side)

    def test_constant_strictified(self):
        fam, drift = realize_hive(Hive.constant(3), 1)
        assert classify_hive(Hive(3, {k: Fraction(v) for k, v in fam.exponent.items()})
                             ).verdict == "strict_hive"
        assert drift.alpha == tuple(Fraction(3 - 2 * k + 1) for k in range(1, 4))

    def test_rejects_non_hive(self):
        vals = {idx: Fraction(0) for idx in index_set(2)}
        vals[(1, 1, 0)] = Fraction(-1)
        with pytest.raises(NotAHive):
            realize_hive(Hive(2, vals), 0)


class TestEmpiricalExponents:
    def test_pure_families_exact(self):
        fam = q_family(3)
        slopes = empirical_exponents(fam, [10.0, 100.0, 1000.0])
        for idx, h in fam.exponent.items():
            assert slopes[idx] == pytest.approx(float(h), abs=1e-9)

    def test_constant_zero(self):
        fam = LiftedFamily(1, {idx: Fraction(5) for idx in index_set(1)},
                           {idx: Fraction(0) for idx in index_set(1)})
        assert all(abs(s) < 1e-12 for s in empirical_exponents(fam, [10, 1e4]).values())

    def test_product_family_slopes_near_maxplus(self):
        f1, f2 = q_family(1), q_family(1)
        rep = direct_sum_check(f1, f2)
        tgrid = [1e2, 1e3, 1e4, 1e5, 1e6]
        slopes = empirical_exponents(rep.product, tgrid)
        budget = math.log(3) / math.log(tgrid[-1])
        for idx, h in rep.maxplus.items():
            assert abs(slopes[idx] - float(h)) <= budget


class TestMainTheoremSweep:
    def test_strict_hive_passes(self):
        res = main_theorem_sweep(q_family(3), [1e3, 1e4, 1e5], directions=180,
                                 random_directions=32)
        assert all(rep.verdict == "pass" for (_t, rep) in res.reports)
        assert res.threshold == 1e3

    def test_negated_exponents_fail(self):
        res = main_theorem_sweep(neg_q_family(2), [1e2, 1e3, 1e4], directions=180,
                                 random_directions=32)
        assert all(rep.verdict == "fail" for (_t, rep) in res.reports)

    def test_degree_one_always_passes(self):
        fam = LiftedFamily(1, {idx: Fraction(1) for idx in index_set(1)},
                           {(1, 0, 0): Fraction(2), (0, 1, 0): Fraction(0),
                            (0, 0, 1): Fraction(-1)})
        res = main_theorem_sweep(fam, [10.0, 1e3, 1e6], directions=64,
                                 random_directions=8)
        assert all(rep.verdict == "pass" for (_t, rep) in res.reports)


class TestBoundaryAsymptotics:
    def test_degree_one_residual_zero(self):
        fam = LiftedFamily(1, {(1, 0, 0): Fraction(3), (0, 1, 0): Fraction(2),
                               (0, 0, 1): Fraction(5)},
                           {(1, 0, 0): Fraction(1), (0, 1, 0): Fraction(0),
                            (0, 0, 1): Fraction(-1)})
        res = boundary_asymptotics(fam, [10.0, 100.0])
        assert res.bound == (0.0,)
        for table in res.residuals.values():
            assert np.max(np.abs(table)) < 1e-9

    def test_quadratic_family_bounds_and_slopes(self):
        fam = q_family(3)
        tgrid = [1e2, 1e3, 1e4, 1e5]
        res = boundary_asymptotics(fam, tgrid)
        assert res.max_violation() <= 0.0
        assert np.max(np.abs(res.slopes - res.target)) <= 2.0 / math.log(tgrid[-1])

    def test_diag_pencil_residual_bound(self):
        # X = diag(t^2, 1), Y = Z = Id: residuals stay within half log 2
        for t in (10.0, 1e3, 1e5):
            p = PencilTriple(cdiag(t ** 2, 1), np.eye(2, dtype=np.complex128),
                             np.eye(2, dtype=np.complex128))
            f = pencil_det(p)
            from hivecurve.pencil import curve_boundary
            hat = np.array(boundary_exponent_view(curve_boundary(f)))
            half = np.array(half_log_boundary(f))
            assert np.max(np.abs(hat - half)) <= 0.5 * math.log(2.0) + 1e-12

    def test_slot_bounds_table(self):
        assert boundary_slot_bounds(1) == (0.0,)
        assert boundary_slot_bounds(2) == (0.5 * math.log(2.0), 0.5 * math.log(2.0))


class TestDirectSum:
    def test_order0_shifts(self):
        f1 = q_family(2)
        f0 = LiftedFamily(0, {(0, 0, 0): Fraction(3)}, {(0, 0, 0): Fraction(2)})
        rep = direct_sum_check(f1, f0)
        assert rep.ok()
        for idx, h in rep.maxplus.items():
            assert h == f1.exponent[idx] + 2

    def test_two_lines(self):
        h1 = {(1, 0, 0): Fraction(1), (0, 1, 0): Fraction(5), (0, 0, 1): Fraction(2)}
        h2 = {(1, 0, 0): Fraction(4), (0, 1, 0): Fraction(0), (0, 0, 1): Fraction(3)}
        ones = {idx: Fraction(1) for idx in index_set(1)}
        rep = direct_sum_check(LiftedFamily(1, ones, h1), LiftedFamily(1, ones, h2))
        assert rep.ok()
        assert rep.maxplus[(1, 1, 0)] == max(h1[(1, 0, 0)] + h2[(0, 1, 0)],
                                             h1[(0, 1, 0)] + h2[(1, 0, 0)])

    def test_block_pencil_product(self):
        rng = np.random.default_rng(51)
        n1, n2 = 2, 3
        p1 = PencilTriple(*(random_pd(rng, n1) for _ in range(3)))
        p2 = PencilTriple(*(random_pd(rng, n2) for _ in range(3)))
        def block(a, b):
            out = np.zeros((n1 + n2, n1 + n2), dtype=np.complex128)
            out[:n1, :n1] = a
            out[n1:, n1:] = b
            return out
        psum = PencilTriple(*(block(a, b) for a, b in zip(p1, p2)))
        from hivecurve.pencil import form_product
        direct = pencil_det(psum)
        prod = form_product(pencil_det(p1), pencil_det(p2))
        for idx in index_set(n1 + n2):
            assert direct.coeffs[idx] == pytest.approx(prod.coeffs[idx], rel=1e-9)


class TestRonkinValue:
    def test_monomial_exact(self):
        f = TernaryForm(3, {idx: 0.0 for idx in index_set(3)} | {(1, 2, 0): 5.0})
        got = ronkin_value(f, (0.3, -0.7, 0.9), RonkinSpec(resolution=64))
        want = math.log(5) + 1 * 0.3 + 2 * (-0.7) + 0 * 0.9
        assert got == pytest.approx(want, abs=1e-10)

    def test_line_jensen_zero(self):
        f = TernaryForm(1, {(1, 0, 0): 1.0, (0, 1, 0): 1.0, (0, 0, 1): 0.0})
        assert abs(ronkin_value(f, (0.0, 0.0, 0.0), RonkinSpec(resolution=2048))) < 1e-4

    def test_homogeneity(self):
        f = TernaryForm(2, {idx: 1.0 + 0.1 * i for i, idx in enumerate(index_set(2))})
        spec = RonkinSpec(resolution=128)
        base = ronkin_value(f, (0.2, -0.1, 0.4), spec)
        shifted = ronkin_value(f, (0.9, 0.6, 1.1), spec)
        assert shifted == pytest.approx(base + 2 * 0.7, abs=1e-6)

    def test_convexity(self):
        rng = np.random.default_rng(61)
        f = pencil_det(PencilTriple(*(random_pd(rng, 2) for _ in range(3))))
        spec = RonkinSpec(resolution=128)
        for _ in range(5):
            p = rng.normal(size=3)
            q = rng.normal(size=3)
            mid = tuple((a + b) / 2 for a, b in zip(p, q))
            nm = ronkin_value(f, mid, spec)
            avg = (ronkin_value(f, tuple(p), spec) + ronkin_value(f, tuple(q), spec)) / 2
            assert nm <= avg + 1e-6

    def test_doubling_verification(self):
        f = TernaryForm(1, {(1, 0, 0): 1.0, (0, 1, 0): 2.0, (0, 0, 1): 3.0})
        spec = RonkinSpec(resolution=64, tolerance=1e-5, verify_doubling=True)
        ronkin_value(f, (0.1, 0.2, 0.3), spec)  # converged: no exception


class TestRonkinCoefficient:
    def test_monomial(self):
        f = TernaryForm(2, {idx: 0.0 for idx in index_set(2)} | {(2, 0, 0): 7.0})
        with pytest.raises(CornerCoefficientZero):
            ronkin_coefficient(f, (2, 0, 0))
        g = TernaryForm(2, {idx: 1e-12 for idx in index_set(2)} | {(2, 0, 0): 7.0})
        del g  # near-monomial handled in the marginal test instead

    def test_line_coefficients(self):
        f = TernaryForm(1, {(1, 0, 0): 2.0, (0, 1, 0): 3.0, (0, 0, 1): 5.0})
        spec = RonkinSpec(resolution=128, tolerance=1e-7)
        assert ronkin_coefficient(f, (1, 0, 0), spec) == pytest.approx(math.log(2), abs=1e-6)
        assert ronkin_coefficient(f, (0, 1, 0), spec) == pytest.approx(math.log(3), abs=1e-6)
        assert ronkin_coefficient(f, (0, 0, 1), spec) == pytest.approx(math.log(5), abs=1e-6)

    def test_edge_marginal_matches_2d(self):
        rng = np.random.default_rng(63)
        f = pencil_det(PencilTriple(*(random_pd(rng, 2) for _ in range(3))))
        spec = RonkinSpec(resolution=256, tolerance=1e-6)
        for j in range(3):
            got = ronkin_coefficient(f, (2 - j, j, 0), spec)
            want = ronkin_edge_marginal(f, j)
            assert abs(got - want) < 1e-2

    def test_scaling_law(self):
        fam = q_family(2)
        spec = RonkinSpec(resolution=96, tolerance=1e-5)
        slot = (1, 1, 0)
        tgrid = [1e3, 1e4, 1e5]
        vals = [ronkin_coefficient(instantiate(fam, t), slot, spec) for t in tgrid]
        logt = np.log(tgrid)
        slope = np.polyfit(logt, vals, 1)[0]
        assert abs(slope - 1.0) < 0.05


class TestRonkinBoundary:
    def test_degree_one(self):
        f = TernaryForm(1, {(1, 0, 0): 2.0, (0, 1, 0): 1.0, (0, 0, 1): 4.0})
        assert ronkin_boundary_check(f, RonkinSpec(resolution=128, tolerance=1e-7)) < 1e-6

    def test_diag_pencil(self):
        p = PencilTriple(cdiag(4, 1), np.eye(2, dtype=np.complex128), cdiag(4, 1))
        res = ronkin_boundary_check(pencil_det(p), RonkinSpec(resolution=256))
        assert res < 1e-2

    def test_product_of_lines(self):
        f = TernaryForm(2, {(2, 0, 0): 1.0, (1, 1, 0): 3.0, (1, 0, 1): 4.0,
                            (0, 2, 0): 2.0, (0, 1, 1): 7.0, (0, 0, 2): 3.0})
        assert ronkin_boundary_check(f, RonkinSpec(resolution=256)) < 1e-2


class TestHive4:
    def test_identity_quadruple_equalities(self):
        eye = np.eye(2)
        zero = np.zeros((2, 2))
        fam = RMatrixFamily(2, tuple(eye.astype(np.complex128) for _ in range(4)),
                            tuple(zero for _ in range(4)))
        rep = hive4_check(fam, [10.0, 100.0, 1000.0])
        assert rep.ok()
        assert all(abs(v) < 1e-9 for v in rep.exponents.values())
        assert all(abs(m) < 1e-9 for m in rep.pairing_margins.values())
        assert all(abs(m) < 1e-9 for m in rep.exchange_margins.values())

    def test_diagonal_hand_values(self):
        # X_i = diag(t^a_i, t^b_i): x_i^2 exponent a_i+b_i, cross exponents
        # max(a_i+b_j, a_j+b_i)
        a = [1.0, 0.0, 2.0, 1.0]
        b = [0.0, 1.0, 1.0, 3.0]
        coeffs = tuple(np.eye(2, dtype=np.complex128) for _ in range(4))
        exps = tuple(np.diag([a[i], b[i]]).astype(float) for i in range(4))
        fam = RMatrixFamily(2, coeffs, exps)
        rep = hive4_check(fam, [1e2, 1e3, 1e4])
        def unit(i, j):
            e = [0, 0, 0, 0]
            e[i] += 1
            e[j] += 1
            return tuple(e)
        for i in range(4):
            assert rep.exponents[unit(i, i)] == pytest.approx(a[i] + b[i], abs=1e-2)
            for j in range(i + 1, 4):
                want = max(a[i] + b[j], a[j] + b[i])
                assert rep.exponents[unit(i, j)] == pytest.approx(want, abs=2e-2)
        assert rep.ok()

    def test_random_scaled_quadruples(self):
        rng = np.random.default_rng(71)
        for _ in range(6):
            mats = [random_pd(rng, 2) for _ in range(4)]
            scales = [Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
                      for _ in range(4)]
            coeffs = tuple(m for m in mats)
            exps = tuple(np.full((2, 2), float(s)) for s in scales)
            fam = RMatrixFamily(2, coeffs, exps)
            rep = hive4_check(fam, [1e2, 1e3, 1e4, 1e5])
            assert rep.ok()


class TestFaceTruncation:
    def test_edge_face_keeps_edge_terms(self):
        from hivecurve.asymptotics import face_truncation
        fam = q_family(2)
        face = [(2, 0, 0), (1, 1, 0), (0, 2, 0)]
        f = face_truncation(fam, face)
        assert f.coeffs[(2, 0, 0)] == 1.0
        assert f.coeffs[(1, 1, 0)] == 1.0
        assert f.coeffs[(0, 0, 2)] == 0.0

    def test_descartes_bound_on_truncated_edge(self):
        # the truncated k=0 edge of a unit face has at most one positive root
        # per sign change in its restriction
        from hivecurve.asymptotics import face_truncation
        from hivecurve.pencil import restrict_edge
        fam = q_family(3)
        face = [(3, 0, 0), (2, 1, 0)]
        f = face_truncation(fam, face)
        coeffs = [c for c in restrict_edge(f, "xy") if c != 0]
        changes = sum(1 for a, b in zip(coeffs, coeffs[1:]) if a * b < 0)
        assert changes <= 1


class TestRMatrixPositivity:
    def test_four_matrix_determinant_coefficients_positive(self):
        from hivecurve.asymptotics import _quad_coefficients
        rng = np.random.default_rng(73)
        for _ in range(20):
            mats = [random_pd(rng, 2) for _ in range(4)]
            table = _quad_coefficients(mats)
            assert all(v > 0 for v in table.values())


class TestRescaleSweep:
    def test_sweep_rescales_wide_exponents(self):
        fam0 = q_family(4)
        wide = LiftedFamily(4, dict(fam0.coeff),
                            {k: 40 * v for k, v in fam0.exponent.items()})
        from hivecurve.asymptotics import main_theorem_sweep
        res = main_theorem_sweep(wide, [1e5, 1e6], directions=90, random_directions=16)
        assert res.exponent_scale > 1
        assert all(rep.verdict == "pass" for (_t, rep) in res.reports)


class TestRonkinSuperadditivity:
    def test_product_coefficients_dominate_maxplus(self):
        # u of a product form is at least the max-plus convolution of the
        # factor tables; equality is only expected asymptotically
        from hivecurve.pencil import form_product
        spec = RonkinSpec(resolution=128, tolerance=1e-6)
        f = TernaryForm(1, {(1, 0, 0): 2.0, (0, 1, 0): 3.0, (0, 0, 1): 5.0})
        g = TernaryForm(1, {(1, 0, 0): 1.0, (0, 1, 0): 7.0, (0, 0, 1): 2.0})
        uf = {idx: ronkin_coefficient(f, idx, spec) for idx in index_set(1)}
        ug = {idx: ronkin_coefficient(g, idx, spec) for idx in index_set(1)}
        prod = form_product(f, g)
        for (ii, jj, kk) in index_set(2):
            best = max(uf[a] + ug[(ii - a[0], jj - a[1], kk - a[2])]
                       for a in index_set(1)
                       if min(ii - a[0], jj - a[1], kk - a[2]) >= 0)
            up = ronkin_coefficient(prod, (ii, jj, kk), spec)
            assert up >= best - 1e-3
