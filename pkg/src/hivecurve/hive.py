"""Exact-rational hives on the triangular grid.

A hive of order ``n`` assigns a rational number to every triple ``(i, j, k)``
of nonnegative integers with ``i + j + k = n`` and satisfies three families of
rhombus (concavity) inequalities.  This module provides the index set, the
inequality enumeration, the classification predicate, the boundary difference
map, exact LP feasibility for prescribed boundaries, and max-plus convolution.

All arithmetic is exact (``fractions.Fraction``) unless a float tolerance is
passed explicitly; no floating point enters any verdict by default.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import DimensionMismatch, NotAHive


def index_set(n):
    """All (i, j, k) with i + j + k = n, ordered lexicographically by (i, j)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return [(i, j, n - i - j) for i in range(n + 1) for j in range(n - i + 1)]


class RhombusInequality(NamedTuple):
    """One unit-rhombus inequality: sum(plus) >= sum(minus)."""
    family: str           # "i", "j" or "k": the coordinate that is >= 2 at the anchor
    plus: tuple           # two TriangleIndex entries on the large side
    minus: tuple          # two TriangleIndex entries on the small side

    def slack(self, values):
        p0, p1 = self.plus
        m0, m1 = self.minus
        return values[p0] + values[p1] - values[m0] - values[m1]


def rhombus_inequalities(n):
    """Enumerate the 3*n*(n-1)/2 rhombus inequalities of the order-n grid."""
    out = []
    for (i, j, k) in index_set(n):
        if k >= 2:
            out.append(RhombusInequality(
                "k",
                ((i + 1, j, k - 1), (i, j + 1, k - 1)),
                ((i, j, k), (i + 1, j + 1, k - 2))))
        if j >= 2:
            out.append(RhombusInequality(
                "j",
                ((i + 1, j - 1, k), (i, j - 1, k + 1)),
                ((i, j, k), (i + 1, j - 2, k + 1))))
        if i >= 2:
            out.append(RhombusInequality(
                "i",
                ((i - 1, j + 1, k), (i - 1, j, k + 1)),
                ((i, j, k), (i - 2, j + 1, k + 1))))
    return out


@dataclass(frozen=True)
class Hive:
    """Values on the order-n triangular grid.  Hive-ness is a predicate."""
    n: int
    values: dict

    def __post_init__(self):
        expected = index_set(self.n)
        if set(self.values) != set(expected):
            raise DimensionMismatch(
                f"hive of order {self.n} needs exactly the {len(expected)} grid entries")

    @classmethod
    def from_function(cls, n, fn):
        return cls(n, {idx: fn(*idx) for idx in index_set(n)})

    @classmethod
    def constant(cls, n, value=Fraction(0)):
        return cls.from_function(n, lambda i, j, k: value)

    def shifted_by_linear(self, a, b, c):
        """Add the linear functional a*i + b*j + c*k; preserves every slack."""
        return Hive(self.n, {(i, j, k): v + a * i + b * j + c * k
                             for (i, j, k), v in self.values.items()})


def quadratic_hive(n):
    """The strict hive i*j + j*k + k*i; every rhombus slack is exactly 1."""
    return Hive.from_function(n, lambda i, j, k: Fraction(i * j + j * k + k * i))


class HiveClassification(NamedTuple):
    verdict: str          # "strict_hive" | "hive" | "not_hive"
    violated: list        # rhombi with slack < -tol
    tight: list           # rhombi with |slack| <= tol


def classify_hive(h, tol=0):
    """Classify grid values as strict hive / hive / not a hive.

    ``h`` may be a Hive or a plain index->value dict (order inferred).  With
    the default ``tol=0`` the verdict is exact; a positive float tolerance is
    for float-valued tables (slack >= -tol counts as satisfied, slack > tol as
    strict).
    """
    if isinstance(h, Hive):
        n, values = h.n, h.values
    else:
        values = h
        n = sum(next(iter(values)))
    violated, tight = [], []
    strict = True
    for rh in rhombus_inequalities(n):
        s = rh.slack(values)
        if s < -tol:
            violated.append(rh)
        elif s <= tol:
            tight.append(rh)
            strict = False
    if violated:
        return HiveClassification("not_hive", violated, tight)
    return HiveClassification("strict_hive" if strict else "hive", violated, tight)


class BoundarySpec(NamedTuple):
    """The three edge difference sequences (alpha, beta, gamma)."""
    alpha: tuple
    beta: tuple
    gamma: tuple

    @property
    def n(self):
        return len(self.alpha)

    def total(self):
        return sum(self.alpha) + sum(self.beta) + sum(self.gamma)


def boundary(h):
    """Consecutive differences of ``h`` along the three sides of the triangle.

    alpha walks the k=0 side from (n,0,0) to (0,n,0), beta the i=0 side from
    (0,n,0) to (0,0,n), gamma the j=0 side from (0,0,n) back to (n,0,0); the
    3n entries always telescope to zero.
    """
    n, v = h.n, h.values
    alpha = tuple(v[(n - r, r, 0)] - v[(n - r + 1, r - 1, 0)] for r in range(1, n + 1))
    beta = tuple(v[(0, n - r, r)] - v[(0, n - r + 1, r - 1)] for r in range(1, n + 1))
    gamma = tuple(v[(r, 0, n - r)] - v[(r - 1, 0, n - r + 1)] for r in range(1, n + 1))
    return BoundarySpec(alpha, beta, gamma)


def _weakly_decreasing(seq):
    return all(seq[i] >= seq[i + 1] for i in range(len(seq) - 1))


def boundary_values(b):
    """Fixed values on the three sides implied by a boundary, with h(n,0,0)=0.

    Returns the partial dict of side entries; raises DimensionMismatch for
    ragged input.  The walk closes up exactly when b.total() == 0.
    """
    n = len(b.alpha)
    if not (len(b.beta) == n and len(b.gamma) == n):
        raise DimensionMismatch("alpha, beta, gamma must share a common length")
    vals = {(n, 0, 0): Fraction(0)}
    acc = Fraction(0)
    for r in range(1, n + 1):
        acc += b.alpha[r - 1]
        vals[(n - r, r, 0)] = acc
    for r in range(1, n + 1):
        acc += b.beta[r - 1]
        vals[(0, n - r, r)] = acc
    for r in range(1, n):
        acc += b.gamma[r - 1]
        vals[(r, 0, n - r)] = acc
    return vals


class HornResult(NamedTuple):
    feasible: bool
    witness: Hive | None


def horn_feasible(b):
    """Decide whether (alpha, beta, gamma) bounds a hive, by exact LP.

    The boundary entries pin all side values (normalising h(n,0,0)=0); a
    phase-one simplex with Bland's rule then searches for interior values
    satisfying every rhombus inequality.  Inputs must be weakly decreasing;
    the witness, when present, reproduces the boundary exactly.
    """
    n = len(b.alpha)
    if not (len(b.beta) == n and len(b.gamma) == n):
        raise DimensionMismatch("alpha, beta, gamma must share a common length")
    for name, seq in (("alpha", b.alpha), ("beta", b.beta), ("gamma", b.gamma)):
        if not _weakly_decreasing(seq):
            raise ValueError(f"{name} must be weakly decreasing")
    b = BoundarySpec(tuple(Fraction(x) for x in b.alpha),
                     tuple(Fraction(x) for x in b.beta),
                     tuple(Fraction(x) for x in b.gamma))
    if b.total() != 0:
        return HornResult(False, None)
    fixed = boundary_values(b)
    interior = [idx for idx in index_set(n) if idx[0] >= 1 and idx[1] >= 1 and idx[2] >= 1]
    col = {idx: c for c, idx in enumerate(interior)}
    rows = []
    rhs = []
    for rh in rhombus_inequalities(n):
        a = [Fraction(0)] * len(interior)
        r = Fraction(0)
        for idx, sign in ((rh.plus[0], 1), (rh.plus[1], 1), (rh.minus[0], -1), (rh.minus[1], -1)):
            if idx in col:
                a[col[idx]] += sign
            else:
                r -= sign * fixed[idx]
        rows.append(a)
        rhs.append(r)
    if not interior:
        if any(r > 0 for r in rhs):
            return HornResult(False, None)
        sol = []
    else:
        sol = _feasible_point(rows, rhs)
        if sol is None:
            return HornResult(False, None)
    values = dict(fixed)
    for idx, c in col.items():
        values[idx] = sol[c]
    return HornResult(True, Hive(n, values))


def _feasible_point(rows, rhs):
    """Find free x with rows @ x >= rhs over the rationals, or None.

    Phase-one simplex on the standard form rows@(u - v) - s = rhs with
    artificial variables and Bland's anti-cycling rule.
    """
    m = len(rows)
    nfree = len(rows[0])
    ncols = 2 * nfree + m          # u, v, slack
    tableau = []
    basis = []
    for i in range(m):
        row = [Fraction(0)] * (ncols + m + 1)
        flip = -1 if rhs[i] < 0 else 1
        for jj in range(nfree):
            row[jj] = flip * rows[i][jj]
            row[nfree + jj] = -flip * rows[i][jj]
        row[2 * nfree + i] = Fraction(-flip)
        row[ncols + i] = Fraction(1)           # artificial
        row[-1] = flip * rhs[i]
        tableau.append(row)
        basis.append(ncols + i)
    # objective: minimise sum of artificials; reduced costs start as -sum(rows)
    cost = [Fraction(0)] * (ncols + m + 1)
    for i in range(m):
        for jj in range(ncols + m + 1):
            cost[jj] -= tableau[i][jj]
    for i in range(m):
        cost[ncols + i] = Fraction(0)

    total_cols = ncols + m
    while True:
        enter = next((jj for jj in range(total_cols) if cost[jj] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise ArithmeticError("phase-one objective unbounded; construction bug")
        piv = tableau[leave][enter]
        tableau[leave] = [x / piv for x in tableau[leave]]
        for i in range(m):
            if i != leave and tableau[i][enter] != 0:
                f = tableau[i][enter]
                tableau[i] = [x - f * y for x, y in zip(tableau[i], tableau[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, tableau[leave])]
        basis[leave] = enter

    objective = -cost[-1]
    if objective != 0:
        return None
    x = [Fraction(0)] * nfree
    for i, bv in enumerate(basis):
        if bv < nfree:
            x[bv] += tableau[i][-1]
        elif bv < 2 * nfree:
            x[bv - nfree] -= tableau[i][-1]
    return x


def convolve(h1, h2):
    """Max-plus convolution; the result is again a hive."""
    for h in (h1, h2):
        if classify_hive(h).verdict == "not_hive":
            raise NotAHive("convolution inputs must be hives")
    n = h1.n + h2.n
    values = {}
    for (I, J, K) in index_set(n):
        best = None
        for (i, j, k) in index_set(h1.n):
            if I - i < 0 or J - j < 0 or K - k < 0:
                continue
            cand = h1.values[(i, j, k)] + h2.values[(I - i, J - j, K - k)]
            if best is None or cand > best:
                best = cand
        values[(I, J, K)] = best
    return Hive(n, values)
