"""Line-probe hyperbolicity checks and the explicit inequality suite.

A positive ternary form of degree n passes the probe check when every sampled
line through a fixed positive base point meets its zero set in n distinct
real points.  This is a falsification check: a pass certifies only that no
counterexample was found among the probes.  The weighted rhombus inequality
suite and the log-shift hive test give the cheap algebraic counterpart.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import DegenerateRestriction, NonpositiveCoefficient
from .hive import classify_hive, index_set, rhombus_inequalities
from .pencil import TernaryForm, sturm_count


class LineProbe(NamedTuple):
    base: tuple
    direction: tuple
    sample_id: int


@dataclass
class HyperbolicityReport:
    verdict: str                  # "pass" | "fail"
    probes: int
    counterexample: LineProbe | None = None
    counterexample_roots: int | None = None
    degenerate_reprobes: int = 0

    def passed(self):
        return self.verdict == "pass"


def _direction_frame(base):
    b = np.asarray(base, dtype=np.float64)
    b = b / np.linalg.norm(b)
    seed = np.array([1.0, 0.0, 0.0])
    if abs(b[0]) > 0.9:
        seed = np.array([0.0, 1.0, 0.0])
    u = seed - (seed @ b) * b
    u /= np.linalg.norm(u)
    v = np.cross(b, u)
    return u, v


def probe_directions(base, count, random_count=0, seed=0):
    """Equally spaced projective directions through ``base`` plus a seeded
    random batch; every line through the base point appears once."""
    u, v = _direction_frame(base)
    thetas = np.pi * np.arange(count) / max(count, 1)
    if random_count:
        rng = np.random.default_rng(seed)
        thetas = np.concatenate([thetas, rng.uniform(0.0, np.pi, random_count)])
    return np.outer(np.cos(thetas), u) + np.outer(np.sin(thetas), v)


def _count_distinct_real(roots, imag_tol, cluster_tol):
    scale = np.maximum(1.0, np.abs(roots))
    real = np.sort(roots[np.abs(roots.imag) <= imag_tol * scale].real)
    count = 0
    last = None
    for r in real:
        if last is None or r - last > cluster_tol * max(1.0, abs(r)):
            count += 1
        last = r
    return count


def _count_exact(coeffs_row, base, direction, n):
    """Distinct real roots of the restriction, in exact rational arithmetic.

    The float base and direction are dyadic rationals, so the restriction
    coefficients are exact and the Sturm count carries no tolerance at all.
    """
    bx, by, bz = (Fraction(float(t)) for t in base)
    dx, dy, dz = (Fraction(float(t)) for t in direction)
    out = [Fraction(0)] * (n + 1)
    for (i, j, k), c in coeffs_row.items():
        c = Fraction(c) if not isinstance(c, Fraction) else c
        for a in range(i + 1):
            ca = math.comb(i, a) * bx ** (i - a) * dx ** a
            for b in range(j + 1):
                cb = math.comb(j, b) * by ** (j - b) * dy ** b
                for cc in range(k + 1):
                    cz = math.comb(k, cc) * bz ** (k - cc) * dz ** cc
                    out[n - (a + b + cc)] += c * ca * cb * cz
    if out[0] == 0:
        raise DegenerateRestriction("restriction drops degree")
    return sturm_count(out)


def vinnikov_check(form, base=(1.0, 1.0, 1.0), directions=360, random_directions=128,
                   seed=0, imag_tol=1e-9, cluster_tol=1e-9, mode="float",
                   max_jitround=2):
    """Count real intersections of probe lines with the zero locus.

    Pass iff every probe line meets the curve in n distinct real points.
    Probes whose restriction degenerates or shows clustered roots are retried
    at jittered directions before counting as failures (tangency through the
    base point is measure-zero).  ``directions`` may be an explicit array of
    direction triples instead of a count.
    """
    if not form.all_positive():
        raise NonpositiveCoefficient("probe check expects a positive coefficient table")
    if min(base) <= 0:
        raise ValueError("base point must be strictly positive")
    n = form.n
    if isinstance(directions, (int, np.integer)):
        dirs = probe_directions(base, int(directions), random_directions, seed)
    else:
        dirs = np.asarray(directions, dtype=np.float64)
    nprobe = dirs.shape[0]
    if n == 0:
        return HyperbolicityReport("pass", nprobe)
    base_arr = np.asarray(base, dtype=np.float64)
    coeff = form.coeff_array()
    exps = form.exponent_rows()
    binom = _kernels.binomial_table(n)
    rows = _kernels.restrict_lines(coeff, exps, base_arr, dirs, binom)
    jitters = 0

    def lead_noise_scale(direction):
        # the leading coefficient is F(direction); its float noise floor is
        # set by the same sum with all terms taken positive
        mags = np.prod(np.abs(direction)[None, :] ** exps, axis=1)
        return float(coeff @ mags)

    def probe_count(row, direction):
        nonlocal jitters
        if mode == "exact":
            # exact leading coefficient: the degree-drop test needs no gate
            try:
                return _count_exact(form.coeffs, base, direction, n)
            except DegenerateRestriction:
                return None
        if abs(row[0]) <= 1e-12 * max(lead_noise_scale(direction), 1e-300):
            return None  # direction sits on the curve: degree drops, caller jitters
        roots = _kernels.polyroots_batch(row[None, :])[0]
        return _count_distinct_real(roots, imag_tol, cluster_tol)

    u, v = _direction_frame(base)
    for p in range(nprobe):
        direction = dirs[p]
        row = rows[p]
        if np.max(np.abs(row)) == 0.0:
            raise DegenerateRestriction("zero restriction; form vanished on a line")
        count = probe_count(row, direction)
        attempt = 0
        while (count is None or count < n) and attempt < max_jitround:
            attempt += 1
            jitters += 1
            theta = 10.0 ** (-4 + attempt)
            jd = math.cos(theta) * direction + math.sin(theta) * (
                v if abs(direction @ u) > abs(direction @ v) else u)
            row = _kernels.restrict_lines(coeff, exps, base_arr, jd[None, :], binom)[0]
            count = probe_count(row, jd)
            direction = jd
        if count is None or count < n:
            probe = LineProbe(tuple(base), tuple(float(t) for t in direction), p)
            return HyperbolicityReport("fail", nprobe, probe, 0 if count is None else count,
                                       jitters)
    return HyperbolicityReport("pass", nprobe, degenerate_reprobes=jitters)


def directional_derivative(form, direction):
    """Derivative of the form along a nonnegative direction; degree drops by one.

    Coefficient rule: out[i,j,k] = (i+1)*dx*F[i+1,j,k] + (j+1)*dy*F[i,j+1,k]
    + (k+1)*dz*F[i,j,k+1].  Probe-passing forms stay probe-passing (tested as
    a property, not assumed).
    """
    if form.n < 1:
        raise ValueError("cannot differentiate a degree-0 form")
    dx, dy, dz = direction
    if min(direction) < 0 or max(direction) <= 0:
        raise ValueError("direction must be nonnegative and nonzero")
    out = {}
    for (i, j, k) in index_set(form.n - 1):
        out[(i, j, k)] = ((i + 1) * dx * form.coeffs[(i + 1, j, k)]
                          + (j + 1) * dy * form.coeffs[(i, j + 1, k)]
                          + (k + 1) * dz * form.coeffs[(i, j, k + 1)])
    return TernaryForm(form.n - 1, out)


class BackwardReport(NamedTuple):
    margins: list        # (RhombusInequality, weight, margin) triples
    verdict: str         # "pass" iff every weighted margin is strictly positive

    def min_margin(self):
        return min(m for (_r, _w, m) in self.margins)


def backward_inequalities(form):
    """Weighted rhombus inequalities on the coefficient table.

    For the k-family at anchor (i,j,k) the weight is 2(k-1)/k and the margin
    is weight*F[i+1,j,k-1]*F[i,j+1,k-1] - F[i,j,k]*F[i+1,j+1,k-2]; the other
    two families are the cyclic analogues.  Pass requires every margin > 0.
    """
    if not form.all_positive():
        raise NonpositiveCoefficient("inequality suite expects positive coefficients")
    c = form.coeffs
    margins = []
    ok = True
    for rh in rhombus_inequalities(form.n):
        anchor = rh.minus[0]
        coord = {"i": anchor[0], "j": anchor[1], "k": anchor[2]}[rh.family]
        weight = 2.0 * (coord - 1) / coord
        margin = weight * float(c[rh.plus[0]]) * float(c[rh.plus[1]]) \
            - float(c[rh.minus[0]]) * float(c[rh.minus[1]])
        margins.append((rh, weight, margin))
        if margin <= 0:
            ok = False
    return BackwardReport(margins, "pass" if ok else "fail")


def v1_vector(n):
    """The explicit log-shift: -log(i! j! k! 2^(ij+jk+ki)) per grid point."""
    out = {}
    for (i, j, k) in index_set(n):
        out[(i, j, k)] = -(math.lgamma(i + 1) + math.lgamma(j + 1) + math.lgamma(k + 1)
                           + (i * j + j * k + k * i) * math.log(2.0))
    return out


def shifted_hive_check(form, tol=1e-12):
    """Classify log(F) - v1 as a hive (float slack tolerance ``tol``).

    Equivalent to all weighted backward margins being nonnegative; the two
    are tested against each other as a cross-module identity.
    """
    if not form.all_positive():
        raise NonpositiveCoefficient("log shift needs positive coefficients")
    v1 = v1_vector(form.n)
    shifted = {idx: math.log(float(c)) - v1[idx] for idx, c in form.coeffs.items()}
    return classify_hive(shifted, tol=tol)
