"""Finite-t families, asymptotic sweeps, Ronkin functions, and r-matrix checks.

A lifted family assigns each grid point a positive coefficient c and a
rational exponent h, standing for the one-parameter coefficient c * t^h.
Instantiating at a finite t produces an ordinary ternary form, so the
asymptotic statements (probe checks stabilising above a threshold, boundary
logs tracking half the hive boundary, amoebas collapsing onto honeycombs)
become desk-scale numerics.

Boundary orientation: the exponent-side statements pair slot k of the hive
boundary with the k-th SMALLEST edge root; curve_boundary returns decreasing
square roots of the edge roots, so the comparison view is
hat_k = -log(bnd[n+1-k]) (reciprocal-reverse), which is weakly decreasing
exactly like a hive boundary.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import CornerCoefficientZero, NotAHive, NotPositiveDefinite
from .hive import BoundarySpec, Hive, boundary, classify_hive, index_set, quadratic_hive
from .hyperbolicity import vinnikov_check
from .pencil import TernaryForm, curve_boundary, form_product, is_positive_definite
from .tropical import Lifting


@dataclass(frozen=True)
class LiftedFamily:
    """Pure one-term coefficient families c * t^h on the grid."""
    n: int
    coeff: dict
    exponent: dict

    def __post_init__(self):
        grid = set(index_set(self.n))
        if set(self.coeff) != grid or set(self.exponent) != grid:
            raise ValueError("family tables must cover the full grid")
        if any(c <= 0 for c in self.coeff.values()):
            raise ValueError("family coefficients must be positive")

    def log_coeff(self, t):
        lt = math.log(t)
        return {idx: math.log(float(self.coeff[idx])) + float(self.exponent[idx]) * lt
                for idx in self.coeff}

    def exponent_range(self):
        vals = [float(h) for h in self.exponent.values()]
        return max(vals) - min(vals)

    def rescaled(self, t_max, max_decades=60.0):
        """Scale exponents down to the range float probing certifies reliably.

        Companion-matrix root counting degrades once instantiated coefficients
        span more than ~60 decades (measured); exact-mode probing tolerates
        any range that instantiates finitely.  Scaling the exponents by a
        positive constant changes neither hive-ness nor strictness.
        """
        span = self.exponent_range() * math.log10(t_max)
        if span <= max_decades:
            return self, Fraction(1)
        scale = Fraction(math.ceil(span / max_decades))
        return LiftedFamily(self.n, dict(self.coeff),
                            {k: Fraction(v) / scale for k, v in self.exponent.items()}), scale

    def lifting(self):
        return Lifting(self.n, {k: Fraction(v) for k, v in self.exponent.items()})


def instantiate(family, t):
    """Evaluate the family at a finite parameter value."""
    if t <= 0:
        raise ValueError("the family parameter must be positive")
    coeffs = {idx: float(family.coeff[idx]) * float(t) ** float(family.exponent[idx])
              for idx in index_set(family.n)}
    if not all(math.isfinite(c) for c in coeffs.values()):
        raise OverflowError("instantiation overflowed; rescale the exponents first")
    return TernaryForm(family.n, coeffs)


@dataclass(frozen=True)
class SumFamily:
    """Coefficient families that are sums of positive terms c * t^h."""
    n: int
    terms: dict           # idx -> tuple of (c, h) pairs

    def log_coeff(self, t):
        lt = math.log(t)
        out = {}
        for idx, terms in self.terms.items():
            logs = [math.log(float(c)) + float(h) * lt for (c, h) in terms]
            top = max(logs)
            out[idx] = top + math.log(sum(math.exp(v - top) for v in logs))
        return out

    def leading_exponents(self):
        return {idx: max(Fraction(h) for (_c, h) in terms)
                for idx, terms in self.terms.items()}

    def value(self, t):
        return {idx: sum(c * t ** h for (c, h) in terms)
                for idx, terms in self.terms.items()}


def realize_hive(h, eps_strict=Fraction(0)):
    """Unit-coefficient family with exponents h + eps*(ij+jk+ki).

    For eps > 0 the exponents form a strict hive.  The boundary drift
    eps * boundary(quadratic) incurred by the strictifier is returned
    alongside the family.
    """
    if classify_hive(h).verdict == "not_hive":
        raise NotAHive("exponent realisation needs a hive")
    eps = Fraction(eps_strict)
    q = quadratic_hive(h.n)
    exps = {idx: h.values[idx] + eps * q.values[idx] for idx in index_set(h.n)}
    fam = LiftedFamily(h.n, {idx: Fraction(1) for idx in index_set(h.n)}, exps)
    qb = boundary(q)
    drift = BoundarySpec(tuple(eps * a for a in qb.alpha),
                         tuple(eps * b for b in qb.beta),
                         tuple(eps * g for g in qb.gamma))
    return fam, drift


def empirical_exponents(family, tgrid):
    """Least-squares slope of log F_ijk(t) against log t, per grid point."""
    if len(tgrid) < 2:
        raise ValueError("need at least two grid values")
    logt = np.array([math.log(t) for t in tgrid])
    rows = [family.log_coeff(t) for t in tgrid]
    design = np.vstack([logt, np.ones_like(logt)]).T
    out = {}
    for idx in rows[0]:
        y = np.array([r[idx] for r in rows])
        slope, _intercept = np.linalg.lstsq(design, y, rcond=None)[0]
        out[idx] = float(slope)
    return out


class SweepResult(NamedTuple):
    reports: list         # (t, HyperbolicityReport)
    threshold: float | None   # smallest grid t from which the verdict is stable
    exponent_scale: Fraction

    def final_verdict(self):
        return self.reports[-1][1].verdict


def main_theorem_sweep(family, tgrid, directions=360, random_directions=128, seed=0,
                       cluster_tol=1e-9):
    """Probe-check the instantiated family along the grid, reporting the
    empirical threshold above which verdicts stabilise."""
    fam, scale = family.rescaled(max(tgrid))
    reports = []
    for t in tgrid:
        rep = vinnikov_check(instantiate(fam, t), directions=directions,
                             random_directions=random_directions, seed=seed,
                             cluster_tol=cluster_tol)
        reports.append((t, rep))
    final = reports[-1][1].verdict
    threshold = None
    for t, rep in reversed(reports):
        if rep.verdict != final:
            break
        threshold = t
    return SweepResult(reports, threshold, scale)


def boundary_exponent_view(bnd):
    """Map decreasing edge-root square roots to the hive-boundary orientation."""
    return tuple(tuple(-math.log(v) for v in reversed(side)) for side in bnd)


def half_log_boundary(form):
    """(1/2) * hive-boundary of the log coefficient table."""
    logs = {idx: math.log(float(c)) for idx, c in form.coeffs.items()}
    b = boundary(Hive(form.n, logs))
    return tuple(tuple(0.5 * x for x in side) for side in b)


def boundary_slot_bounds(n):
    """Per-slot constant: residuals are bounded by half the log of the larger
    adjacent binomial (the elementary-symmetric term count)."""
    return tuple(0.5 * math.log(max(math.comb(n, k - 1), math.comb(n, k)))
                 for k in range(1, n + 1))


class BoundaryAsymptotics(NamedTuple):
    residuals: dict       # t -> (3, n) residual array
    bound: tuple          # per-slot bound, length n
    slopes: np.ndarray    # (3, n) slopes of the boundary view against log t
    target: np.ndarray    # (3, n): half the boundary of the exponent hive

    def max_violation(self):
        worst = 0.0
        for res in self.residuals.values():
            worst = max(worst, float(np.max(np.abs(res) - np.array(self.bound))))
        return worst


def boundary_asymptotics(family, tgrid):
    """Residuals of the edge-root logs against half the log-coefficient
    boundary, with the uniform binomial bound and the limiting slopes."""
    n = family.n
    bound = boundary_slot_bounds(n)
    residuals = {}
    views = []
    for t in tgrid:
        form = instantiate(family, t)
        hat = np.array(boundary_exponent_view(curve_boundary(form)))
        half = np.array(half_log_boundary(form))
        residuals[t] = hat - half
        views.append(hat)
    logt = np.array([math.log(t) for t in tgrid])
    design = np.vstack([logt, np.ones_like(logt)]).T
    stacked = np.array(views)      # (T, 3, n)
    slopes = np.empty((3, n))
    for f in range(3):
        for k in range(n):
            slopes[f, k] = np.linalg.lstsq(design, stacked[:, f, k], rcond=None)[0][0]
    hb = boundary(Hive(n, {k: Fraction(v) for k, v in family.exponent.items()}))
    target = 0.5 * np.array([[float(x) for x in side] for side in hb])
    return BoundaryAsymptotics(residuals, bound, slopes, target)


class DirectSumReport(NamedTuple):
    product: SumFamily
    coefficient_identity: bool     # product family == polynomial product, exact
    exponent_identity: bool        # leading exponents == max-plus convolution
    maxplus: dict

    def ok(self):
        return self.coefficient_identity and self.exponent_identity


def _maxplus_convolve(e1, n1, e2, n2):
    out = {}
    for (ii, jj, kk) in index_set(n1 + n2):
        best = None
        for (i, j, k), h in e1.items():
            i2, j2, k2 = ii - i, jj - j, kk - k
            if min(i2, j2, k2) < 0:
                continue
            cand = Fraction(h) + Fraction(e2[(i2, j2, k2)])
            if best is None or cand > best:
                best = cand
        out[(ii, jj, kk)] = best
    return out


def direct_sum_check(fam1, fam2, t_exact=Fraction(7, 2)):
    """Product family vs polynomial product, and leading exponents vs
    max-plus convolution; both identities are exact (positive terms, no
    cancellation)."""
    n = fam1.n + fam2.n
    terms = {idx: [] for idx in index_set(n)}
    for (i, j, k), c1 in fam1.coeff.items():
        h1 = fam1.exponent[(i, j, k)]
        for (p, q, r), c2 in fam2.coeff.items():
            h2 = fam2.exponent[(p, q, r)]
            terms[(i + p, j + q, k + r)].append(
                (Fraction(c1) * Fraction(c2), Fraction(h1) + Fraction(h2)))
    product = SumFamily(n, {idx: tuple(v) for idx, v in terms.items()})

    coeff_ok = True
    if all(Fraction(h).denominator == 1
           for fam in (fam1, fam2) for h in fam.exponent.values()):
        t = Fraction(t_exact)
        f1 = TernaryForm(fam1.n, {idx: Fraction(fam1.coeff[idx]) * t ** int(fam1.exponent[idx])
                                  for idx in fam1.coeff})
        f2 = TernaryForm(fam2.n, {idx: Fraction(fam2.coeff[idx]) * t ** int(fam2.exponent[idx])
                                  for idx in fam2.coeff})
        direct = form_product(f1, f2).coeffs
        via_family = product.value(t)
        coeff_ok = all(direct[idx] == via_family[idx] for idx in direct)

    maxplus = _maxplus_convolve(fam1.exponent, fam1.n, fam2.exponent, fam2.n)
    lead = product.leading_exponents()
    exp_ok = all(lead[idx] == maxplus[idx] for idx in maxplus)
    return DirectSumReport(product, coeff_ok, exp_ok, maxplus)


def face_truncation(family, face_points):
    """Coefficients of the family restricted to a subdivision face.

    Off-face entries are zeroed; the on-face entries keep their plain
    coefficients c (the leading behaviour along the face's supporting
    functional).  Used for edge-restriction sign-change bounds.
    """
    face = set(face_points)
    table = {idx: (float(family.coeff[idx]) if idx in face else 0.0)
             for idx in index_set(family.n)}
    return TernaryForm(family.n, table)


# ---------------------------------------------------------------------------
# Ronkin functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RonkinSpec:
    resolution: int = 256          # outer trapezoid points on the circle
    tolerance: float = 1e-6        # doubling/minimisation tolerance
    window: tuple | None = None    # convex-search window half-width override
    verify_doubling: bool = False

    def __post_init__(self):
        if self.resolution < 16:
            raise ValueError("resolution must be at least 16")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


def _torus_mean_log(form, X, Y, resolution):
    """Mean of log|F(e^{X+i a}, e^{Y+i b}, 1)| over the 2-torus.

    The inner circle integral is Jensen-exact per outer angle:
    mean_b log|p(e^{Y+ib})| = log|lead(p)| + deg*... reduces to
    log|c_top| + sum_r max(Y, log|w_r|), so only the outer direction is
    discretised; the integrand there is piecewise smooth and the periodic
    trapezoid rule converges fast.
    """
    n = form.n
    thetas = 2.0 * np.pi * (np.arange(resolution) + 0.5) / resolution
    a = np.exp(X + 1j * thetas)
    # p(w) = sum_j c_j(a) w^j with c_j(a) = sum_i F_{i,j,k} a^i
    cols = np.zeros((resolution, n + 1), dtype=np.complex128)
    for (i, j, _k), c in form.coeffs.items():
        cols[:, j] += float(c) * a ** i
    degrees = n
    while degrees > 0 and np.max(np.abs(cols[:, degrees])) == 0.0:
        degrees -= 1
    if degrees == 0:
        vals = np.log(np.abs(cols[:, 0]))
        return float(np.mean(vals))
    rows = np.ascontiguousarray(cols[:, :degrees + 1][:, ::-1])
    lead = np.abs(rows[:, 0])
    if np.min(lead) == 0.0:
        raise CornerCoefficientZero("leading slice coefficient vanished on the torus")
    roots = _kernels.polyroots_batch(rows)
    mags = np.abs(roots)
    with np.errstate(divide="ignore"):
        logmags = np.where(mags > 0, np.log(np.maximum(mags, 1e-300)), -np.inf)
    contrib = np.maximum(float(Y), logmags).sum(axis=1)
    return float(np.mean(np.log(lead) + contrib))


def ronkin_value(form, point, spec=RonkinSpec()):
    """Torus average of log|F| at a point of log-space.

    Reduces by homogeneity to a 2-torus integral of the dehomogenised
    polynomial: N(x,y,z) = n*z + N2(x-z, y-z).
    """
    x, y, z = (float(v) for v in point)
    val = form.n * z + _torus_mean_log(form, x - z, y - z, spec.resolution)
    if spec.verify_doubling:
        val2 = form.n * z + _torus_mean_log(form, x - z, y - z, 2 * spec.resolution)
        if abs(val - val2) > spec.tolerance:
            raise ArithmeticError(
                f"quadrature not converged: |{val} - {val2}| > {spec.tolerance}")
        return val2
    return val


def _auto_window(form):
    logs = {idx: math.log(float(c)) for idx, c in form.coeffs.items() if c != 0}
    span = max(logs.values()) - min(logs.values())
    return span / max(form.n, 1) + 18.0


def _golden_min(fn, lo, hi, tol):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    return (a + b) / 2.0


def ronkin_coefficient(form, idx, spec=RonkinSpec()):
    """Legendre-type coefficient: inf over log-space of N - i*x - j*y - k*z.

    The objective is invariant along the diagonal, so the search runs over
    the (x, y) chart with z = 0: a coarse grid inside an auto-sized window,
    then golden-section refinement per coordinate.
    """
    n = form.n
    for corner in ((n, 0, 0), (0, n, 0), (0, 0, n)):
        if form.coeffs[corner] == 0:
            raise CornerCoefficientZero(f"corner coefficient {corner} is zero")
    i, j, _k = idx

    def objective(X, Y):
        return _torus_mean_log(form, X, Y, spec.resolution) - i * X - j * Y

    half = spec.window if spec.window is not None else _auto_window(form)
    grid = np.linspace(-half, half, 33)
    best = (math.inf, 0.0, 0.0)
    for X in grid:
        for Y in grid:
            v = objective(X, Y)
            if v < best[0]:
                best = (v, X, Y)
    _v, X, Y = best
    step = float(grid[1] - grid[0])
    for _round in range(3):
        X = _golden_min(lambda s: objective(s, Y), X - step, X + step, spec.tolerance)
        Y = _golden_min(lambda s: objective(X, s), Y - step, Y + step, spec.tolerance)
        step *= 0.25
    return objective(X, Y)


def ronkin_edge_marginal(form, j):
    """u for the slot (n-j, j, 0) from the x-y edge restriction alone.

    For p(u) = F(1, u, 0) with root moduli r_1 >= ... >= r_d (padded with
    zeros up to n), the infimum is log(lead coeff) + sum of the n-j largest
    log moduli; zero moduli send the value to -inf, matching a vanishing
    edge coefficient.
    """
    n = form.n
    coeffs = np.array([float(form.coeffs[(n - jj, jj, 0)]) for jj in range(n + 1)])
    if coeffs[n] == 0:
        raise CornerCoefficientZero("edge marginal needs the (0, n, 0) corner")
    roots = np.roots(coeffs[::-1])
    mags = np.sort(np.abs(roots))[::-1]
    mags = np.concatenate([mags, np.zeros(n - len(mags))])
    take = mags[:n - j]
    if np.any(take == 0.0):
        return -math.inf
    return float(math.log(coeffs[n]) + np.sum(np.log(take)))


def ronkin_boundary_check(form, spec=RonkinSpec()):
    """Max residual between the edge-root view and half the boundary of the
    Ronkin coefficient table."""
    hat = np.array(boundary_exponent_view(curve_boundary(form)))
    u = {idx: ronkin_coefficient(form, idx, spec) for idx in _boundary_slots(form.n)}
    filled = {idx: u.get(idx, 0.0) for idx in index_set(form.n)}
    b = boundary(Hive(form.n, filled))
    half = 0.5 * np.array([[float(v) for v in side] for side in b])
    return float(np.max(np.abs(hat - half)))


def _boundary_slots(n):
    out = set()
    for r in range(n + 1):
        out.add((n - r, r, 0))
        out.add((0, n - r, r))
        out.add((r, 0, n - r))
    return out


# ---------------------------------------------------------------------------
# four-matrix families (order 2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RMatrixFamily:
    """r Hermitian matrix families with entrywise (coefficient, exponent)."""
    order: int
    coeffs: tuple        # r complex arrays
    exponents: tuple     # r real arrays

    @property
    def r(self):
        return len(self.coeffs)

    def at(self, t):
        out = []
        for c, h in zip(self.coeffs, self.exponents):
            out.append(np.asarray(c, dtype=np.complex128)
                       * np.float_power(float(t), np.asarray(h, dtype=np.float64)))
        return out


def _quad_coefficients(mats):
    """Coefficient table of det(sum x_i M_i) for 2x2 matrices.

    The x_a^2 coefficient is det(M_a); the x_a x_b coefficient is expanded
    permutation-wise as A00*B11 + B00*A11 - 2*Re(A01*conj(B01)).  The trace
    identity tr(A)tr(B) - tr(AB) is equivalent but cancels catastrophically
    once the entries span many orders of magnitude.
    """
    r = len(mats)
    out = {}
    for a in range(r):
        out[_unit2(a, a, r)] = float(np.linalg.det(mats[a]).real)
    for a in range(r):
        for b in range(a + 1, r):
            ma, mb = mats[a], mats[b]
            val = (ma[0, 0] * mb[1, 1] + mb[0, 0] * ma[1, 1]).real \
                - 2.0 * (ma[0, 1] * np.conj(mb[0, 1])).real
            out[_unit2(a, b, r)] = float(val)
    return out


def _unit2(a, b, r):
    e = [0] * r
    e[a] += 1
    e[b] += 1
    return tuple(e)


class Hive4Report(NamedTuple):
    exponents: dict          # degree-2 multi-index -> estimated slope
    pairing_margins: dict    # symmetric max-inequalities: margin >= 0 passes
    exchange_margins: dict   # twelve exchange inequalities
    tolerance: float

    def ok(self):
        return (all(m >= -self.tolerance for m in self.pairing_margins.values())
                and all(m >= -self.tolerance for m in self.exchange_margins.values()))


def hive4_check(rfam, tgrid, tolerance=1e-2):
    """Estimate the ten exponents of det(x1 X1 + ... + x4 X4) for 2x2
    families and test the three pairing and twelve exchange inequalities."""
    if rfam.r != 4 or rfam.order != 2:
        raise ValueError("the four-matrix check wants four 2x2 families")
    tables = []
    for t in tgrid:
        mats = rfam.at(t)
        for m in mats:
            if not is_positive_definite(m):
                raise NotPositiveDefinite(f"family matrix not PD at t={t}")
        tables.append(_quad_coefficients(mats))
    logt = np.array([math.log(t) for t in tgrid])
    design = np.vstack([logt, np.ones_like(logt)]).T
    exps = {}
    for key in tables[0]:
        y = np.array([math.log(tab[key]) for tab in tables])
        exps[key] = float(np.linalg.lstsq(design, y, rcond=None)[0][0])

    def e(a, b):
        return exps[_unit2(a, b, 4)]

    pairings = {((0, 1), (2, 3)): None, ((0, 2), (1, 3)): None, ((0, 3), (1, 2)): None}
    margins = {}
    keys = list(pairings)
    for p in keys:
        others = [q for q in keys if q != p]
        lhs = e(*p[0]) + e(*p[1])
        rhs = max(e(*q[0]) + e(*q[1]) for q in others)
        margins[p] = rhs - lhs
    exchange = {}
    for a in range(4):
        rest = [x for x in range(4) if x != a]
        for b, c in ((rest[0], rest[1]), (rest[0], rest[2]), (rest[1], rest[2])):
            lhs = e(a, a) + e(b, c)
            rhs = e(a, b) + e(a, c)
            exchange[(a, (b, c))] = rhs - lhs
    return Hive4Report(exps, margins, exchange, tolerance)
