import math
from fractions import Fraction

import numpy as np
import pytest

from hivecurve.errors import NotHiveDual
from hivecurve.hive import Hive, boundary, classify_hive, index_set, quadratic_hive
from hivecurve.pencil import TernaryForm
from hivecurve.tropical import (
    Lifting, amoeba_sample, classify_subdivision,
    distance_to_tropical, honeycomb_boundary, regular_subdivision,
    tropical_curve,
)

from test_hive import random_hive


def lifting_from_values(n, mapping):
    vals = {idx: Fraction(0) for idx in index_set(n)}
    vals.update({k: Fraction(v) for k, v in mapping.items()})
    return Lifting(n, vals)


class TestRegularSubdivision:
    def test_constant_single_cell(self):
        sub = regular_subdivision(lifting_from_values(2, {}))
        assert len(sub.cells) == 1
        cell = sub.cells[0]
        assert set(cell.vertices) == {(2, 0, 0), (0, 2, 0), (0, 0, 2)}
        assert cell.points == frozenset(index_set(2))

    def test_quadratic_gives_standard_triangulation(self):
        for n in (2, 3, 4):
            sub = regular_subdivision(Lifting.from_hive(quadratic_hive(n)))
            assert len(sub.cells) == n * n
            assert all(len(c.points) == 3 for c in sub.cells)

    def test_long_edge_lifting(self):
        # heights 0 except a dip at (1,1,0): single cell whose k=0 side is the
        # long edge from (2,0,0) to (0,2,0), with (1,1,0) untied
        sub = regular_subdivision(lifting_from_values(2, {(1, 1, 0): -1}))
        assert len(sub.cells) == 1
        assert (1, 1, 0) not in sub.cells[0].points
        assert ((0, 2, 0), (2, 0, 0)) in sub.edges

    def test_certifying_functionals(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            n = int(rng.integers(1, 5))
            vals = {idx: Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
                    for idx in index_set(n)}
            sub = regular_subdivision(Lifting(n, vals))
            for cell in sub.cells:
                a, b, c = cell.functional
                for idx in index_set(n):
                    gap = a * idx[0] + b * idx[1] + c - vals[idx]
                    if idx in cell.points:
                        assert gap == 0
                    else:
                        assert gap > 0


class TestClassifySubdivision:
    def test_quadratic_standard(self):
        sub = regular_subdivision(Lifting.from_hive(quadratic_hive(3)))
        assert classify_subdivision(sub) == "standard"

    def test_constant_coarsening(self):
        sub = regular_subdivision(lifting_from_values(3, {}))
        assert classify_subdivision(sub) == "coarsening_of_standard"

    def test_long_edge_other(self):
        sub = regular_subdivision(lifting_from_values(2, {(1, 1, 0): -1}))
        assert classify_subdivision(sub) == "other"

    def test_interior_dip_other(self):
        # all lattice points except the untied centre: the pure edge test
        # would wrongly call this a coarsening
        sub = regular_subdivision(lifting_from_values(3, {(1, 1, 1): -1}))
        assert classify_subdivision(sub) == "other"

    def test_equivalence_with_hive_predicate(self):
        rng = np.random.default_rng(17)
        n_checked = {"strict_hive": 0, "hive": 0, "not_hive": 0}
        for trial in range(120):
            n = int(rng.integers(1, 4))
            kind = trial % 3
            if kind == 0:
                vals = {idx: Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4)))
                        for idx in index_set(n)}
                h = Hive(n, vals)
            elif kind == 1:
                h = random_hive(rng, n)
            else:
                h = Hive(n, {idx: random_hive(rng, n).values[idx]
                             + Fraction(i * j + j * k + k * i)
                             for idx in index_set(n) for (i, j, k) in [idx]})
            verdict = classify_hive(h).verdict
            n_checked[verdict] += 1
            cls = classify_subdivision(regular_subdivision(Lifting.from_hive(h)))
            assert (verdict == "strict_hive") == (cls == "standard"), (h, cls)
            assert (verdict in ("strict_hive", "hive")) == \
                (cls in ("standard", "coarsening_of_standard")), (h, cls)
        assert min(n_checked.values()) > 0  # corpus hit all three classes


class TestTropicalCurve:
    def test_order1_single_vertex(self):
        t = tropical_curve(lifting_from_values(1, {(1, 0, 0): 2, (0, 1, 0): 3,
                                                   (0, 0, 1): 5}))
        assert len(t.vertices) == 1
        assert len(t.edges) == 0
        assert t.ray_count() == 3
        assert {r[3] for r in t.rays} == {"k0", "i0", "j0"}

    def test_honeycomb_combinatorics(self):
        for n in (2, 3, 4):
            t = tropical_curve(Lifting.from_hive(quadratic_hive(n)))
            assert len(t.vertices) == n * n
            assert t.ray_count() == 3 * n
            assert t.check_balanced()

    def test_balancing_random(self):
        rng = np.random.default_rng(29)
        for _ in range(15):
            n = int(rng.integers(1, 5))
            vals = {idx: Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
                    for idx in index_set(n)}
            t = tropical_curve(Lifting(n, vals))
            assert t.check_balanced()
            assert len(t.vertices) == len(t.subdivision.cells)
            assert t.ray_count() == 3 * n

    def test_linear_shift_translates(self):
        base = Lifting.from_hive(quadratic_hive(2))
        a, b, c = Fraction(3), Fraction(-1), Fraction(2)
        t0 = tropical_curve(base)
        t1 = tropical_curve(base.shifted_by_linear(a, b, c))
        # chart uses (x-z, y-z): adding a*i+b*j+c*k moves vertices by -(a-c, b-c)
        for (x0, y0), (x1, y1) in zip(t0.vertices, t1.vertices):
            assert x1 - x0 == -(a - c)
            assert y1 - y0 == -(b - c)


class TestHoneycombBoundary:
    def test_constant_all_rays_at_zero(self):
        t = tropical_curve(lifting_from_values(2, {}))
        b = honeycomb_boundary(t)
        assert b.alpha == b.beta == b.gamma == (0, 0)

    def test_quadratic_n2(self):
        h = quadratic_hive(2)
        b = honeycomb_boundary(tropical_curve(Lifting.from_hive(h)))
        assert b == boundary(h)

    def test_order1(self):
        h = Hive(1, {(1, 0, 0): Fraction(4), (0, 1, 0): Fraction(1), (0, 0, 1): Fraction(-5)})
        b = honeycomb_boundary(tropical_curve(Lifting.from_hive(h)))
        assert b == boundary(h)

    def test_matches_hive_boundary_random(self):
        rng = np.random.default_rng(37)
        for _ in range(20):
            n = int(rng.integers(1, 5))
            h = random_hive(rng, n)
            assert honeycomb_boundary(tropical_curve(Lifting.from_hive(h))) == boundary(h)

    def test_non_hive_ray_pattern_rejected(self):
        t = tropical_curve(lifting_from_values(2, {(1, 1, 0): -1}))
        # single cell: only 3 long rays, one per side, multiplicity 2 each; the
        # pattern is still side-regular so boundary extraction works
        b = honeycomb_boundary(t)
        assert len(b.alpha) == 2
        # a curve with a clipped ray list must be rejected
        t.rays = t.rays[:-1]
        with pytest.raises(NotHiveDual):
            honeycomb_boundary(t)


class TestAmoeba:
    def test_monomial_empty(self):
        f = TernaryForm(2, {idx: 0.0 for idx in index_set(2)} | {(1, 1, 0): 1.0})
        cloud = amoeba_sample(f, resolution=(8, 8), phases=4)
        assert len(cloud) == 0

    def test_line_amoeba_membership(self):
        f = TernaryForm(1, {(1, 0, 0): 1.0, (0, 1, 0): 1.0, (0, 0, 1): 1.0})
        cloud = amoeba_sample(f, resolution=(16, 16), phases=8, window=(-2, 2, -2, 2))
        assert len(cloud) > 0
        x = np.exp(cloud.points[:, 0])
        y = np.exp(cloud.points[:, 1])
        assert np.all(x <= y + 1 + 1e-9)
        assert np.all(y <= x + 1 + 1e-9)
        assert np.all(1 <= x + y + 1e-9)

    def test_samples_are_zeros(self):
        # membership by construction: the z-slice solve returns exact zeros
        f = TernaryForm(2, {(2, 0, 0): 1.0, (1, 1, 0): 3.0, (1, 0, 1): 4.0,
                            (0, 2, 0): 2.0, (0, 1, 1): 7.0, (0, 0, 2): 3.0})
        cloud = amoeba_sample(f, resolution=(6, 6), phases=3, window=(-1, 1, -1, 1))
        assert len(cloud) > 0

    def test_scaled_cloud_near_tropical(self):
        # desk-scale version of the Hausdorff statement for the strict hive
        h = quadratic_hive(2)
        t = 1e6
        logt = math.log(t)
        coeffs = {idx: float(t) ** (idx[0] * idx[1] + idx[1] * idx[2] + idx[2] * idx[0])
                  for idx in index_set(2)}
        f = TernaryForm(2, coeffs)
        win = tuple(c * logt for c in (-3, 3, -3, 3))
        cloud = amoeba_sample(f, resolution=(24, 24), phases=8, window=win)
        curve = tropical_curve(Lifting.from_hive(h))
        d = distance_to_tropical(cloud.points, curve, scale=1.0 / logt)
        assert d < 0.05


class TestPerturbation:
    def test_seeded_perturbation_triangulates(self):
        flat = lifting_from_values(3, {})
        sub = regular_subdivision(flat)
        assert len(sub.cells) == 1
        # generic heights give a triangulation (not necessarily using every
        # lattice point: sub-hull points drop out)
        tri = regular_subdivision(flat, perturb_seed=5)
        assert all(len(c.points) == 3 for c in tri.cells)
        assert len(tri.cells) >= 4
        # deterministic for a fixed seed
        tri2 = regular_subdivision(flat, perturb_seed=5)
        assert [c.points for c in tri.cells] == [c.points for c in tri2.cells]
