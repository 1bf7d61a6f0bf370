"""Complex Hermitian pencils and their determinantal ternary forms.

Float mode works on numpy complex128 arrays; exact mode on object arrays of
GaussianRational (Fraction real/imaginary parts), so determinants, principal
minors and characteristic polynomials can be computed without rounding.

The degree-n form det(x*X + y*Y + z*Z) is recovered by evaluating the
determinant on the integer principal lattice {(a, b, 1) : a + b <= n} and
solving the (unisolvent) interpolation system, which is exact on rational
input and refined in extended precision on float input.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import (NoConvergence, NonRealEdgeRoots, NotHermitian,
                     NotInvertible, NotPositiveDefinite, ProductNotIdentity,
                     ZeroPolynomial)
from .hive import index_set


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def _coerce(cls, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational((self.re * o.re + self.im * o.im) / d,
                                (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


def gaussian_matrix(re, im=None):
    """Object array of GaussianRational from rational real/imag part tables."""
    re = [list(row) for row in re]
    n = len(re)
    if im is None:
        im = [[0] * n for _ in range(n)]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = GaussianRational(re[i][j], im[i][j])
    return out


def is_exact_matrix(m):
    return m.dtype == object


def conj_transpose(m):
    if is_exact_matrix(m):
        n = m.shape[0]
        out = np.empty_like(m)
        for i in range(n):
            for j in range(n):
                out[i, j] = m[j, i].conjugate()
        return out
    return m.conj().T


def check_hermitian(m, tol=1e-12):
    """Raise NotHermitian unless m equals its conjugate transpose.

    Exact matrices are compared exactly; float matrices entrywise within
    tol * (Frobenius norm).
    """
    if is_exact_matrix(m):
        mh = conj_transpose(m)
        if any(m[i, j] != mh[i, j] for i in range(m.shape[0]) for j in range(m.shape[1])):
            raise NotHermitian("matrix is not exactly Hermitian")
        return
    scale = max(np.linalg.norm(m), 1.0)
    if np.max(np.abs(m - m.conj().T)) > tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")


def exact_det(m):
    """Exact determinant of an object matrix by Gaussian elimination."""
    a = m.copy()
    n = a.shape[0]
    det = GaussianRational(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r, col].is_zero()), None)
        if piv is None:
            return GaussianRational(0)
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            det = -det
        det = det * a[col, col]
        inv = GaussianRational(1) / a[col, col]
        for r in range(col + 1, n):
            f = a[r, col] * inv
            if not f.is_zero():
                for c in range(col, n):
                    a[r, c] = a[r, c] - f * a[col, c]
    return det


def exact_inverse(m):
    """Exact inverse of an object matrix; NotInvertible when singular."""
    n = m.shape[0]
    a = m.copy()
    inv = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            inv[i, j] = GaussianRational(1 if i == j else 0)
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r, col].is_zero()), None)
        if piv is None:
            raise NotInvertible("exact matrix is singular")
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            inv[[col, piv]] = inv[[piv, col]]
        f = GaussianRational(1) / a[col, col]
        for c in range(n):
            a[col, c] = a[col, c] * f
            inv[col, c] = inv[col, c] * f
        for r in range(n):
            if r != col and not a[r, col].is_zero():
                g = a[r, col]
                for c in range(n):
                    a[r, c] = a[r, c] - g * a[col, c]
                    inv[r, c] = inv[r, c] - g * inv[col, c]
    return inv


def is_positive_definite(m, tol=1e-12):
    """Leading principal minors > 0 (exact) or Cholesky pivots > tol (float)."""
    check_hermitian(m)
    n = m.shape[0]
    if is_exact_matrix(m):
        for k in range(1, n + 1):
            d = exact_det(m[:k, :k])
            if d.im != 0:
                raise NotHermitian("principal minor has nonzero imaginary part")
            if d.re <= 0:
                return False
        return True
    a = np.array(m, dtype=np.complex128)
    orig_diag = np.abs(np.diag(a)).astype(float)
    if np.min(orig_diag) <= 0.0:
        return False
    for k in range(n):
        piv = a[k, k].real
        # pivot noise scales with the row's own original diagonal entry
        if piv <= tol * orig_diag[k]:
            return False
        a[k, k] = math.sqrt(piv)
        a[k, k + 1:] = a[k, k + 1:] / a[k, k]
        for r in range(k + 1, n):
            a[r, r:] = a[r, r:] - np.conj(a[k, r]) * a[k, r:]
    return True


def hermitian_eigenvalues(m, tol=1e-12, max_sweeps=60):
    """Eigenvalues of a Hermitian matrix, weakly decreasing.

    Cyclic Jacobi with complex rotations; terminates when the off-diagonal
    Frobenius norm falls below tol * ||m||, else raises NoConvergence after
    max_sweeps sweeps.
    """
    check_hermitian(m)
    a = np.array(m, dtype=np.complex128, copy=True)
    n = a.shape[0]
    if n == 1:
        return [float(a[0, 0].real)]
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return [0.0] * n
    diag, off, _sweeps = _kernels.jacobi_hermitian(a, tol * scale, max_sweeps)
    if off > tol * scale:
        raise NoConvergence(
            f"Jacobi sweeps did not reach off-norm {tol * scale:g} (got {off:g})")
    return sorted((float(x) for x in diag), reverse=True)


def singular_values(a):
    """Positive square roots of the eigenvalues of a* a, weakly decreasing."""
    a = np.array(a, dtype=np.complex128)
    w = hermitian_eigenvalues(a.conj().T @ a)
    return [math.sqrt(max(x, 0.0)) for x in w]


def characteristic_polynomial_exact(m):
    """Coefficients of det(u*I - m), descending, exact rationals.

    Faddeev-LeVerrier over GaussianRational; for Hermitian input all
    coefficients are real and are returned as Fractions.
    """
    if not is_exact_matrix(m):
        m = gaussian_matrix([[Fraction(x) for x in row] for row in np.real(m)],
                            [[Fraction(x) for x in row] for row in np.imag(m)])
    n = m.shape[0]
    coeffs = [GaussianRational(1)]
    nmat = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            nmat[i, j] = GaussianRational(0)
    for k in range(1, n + 1):
        for i in range(n):
            nmat[i, i] = nmat[i, i] + coeffs[-1]
        nmat = m @ nmat
        tr = GaussianRational(0)
        for i in range(n):
            tr = tr + nmat[i, i]
        coeffs.append(tr / GaussianRational(-k))
    out = []
    for c in coeffs:
        if c.im != 0:
            raise NotHermitian("characteristic polynomial is not real")
        out.append(c.re)
    return out


# ---------------------------------------------------------------------------
# ternary forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TernaryForm:
    """Homogeneous degree-n polynomial in (x, y, z) as a full coefficient table."""
    n: int
    coeffs: dict

    def __post_init__(self):
        if set(self.coeffs) != set(index_set(self.n)):
            raise ValueError(f"coefficient table must cover the full degree-{self.n} grid")

    def coeff_array(self):
        return np.array([float(self.coeffs[idx]) for idx in index_set(self.n)])

    def exponent_rows(self):
        return np.array(index_set(self.n), dtype=np.int64)

    def evaluate(self, x, y, z):
        return sum(c * x ** i * y ** j * z ** k for (i, j, k), c in self.coeffs.items())

    def all_positive(self):
        return all(c > 0 for c in self.coeffs.values())


def form_product(f, g):
    """Polynomial product of two ternary forms (exact when inputs are exact)."""
    n = f.n + g.n
    zero = Fraction(0) if all(isinstance(c, (int, Fraction)) for c in f.coeffs.values()) else 0.0
    out = {idx: zero for idx in index_set(n)}
    for (i, j, k), a in f.coeffs.items():
        for (p, q, r), b in g.coeffs.items():
            out[(i + p, j + q, k + r)] += a * b
    return TernaryForm(n, out)


class PencilTriple(NamedTuple):
    X: object
    Y: object
    Z: object


class GLTriple(NamedTuple):
    A: object
    B: object
    C: object


def _interp_grid(n):
    return [(a, b) for a in range(n + 1) for b in range(n + 1 - a)]


def pencil_det(p, mode="float", pd_tol=1e-12):
    """Expand det(x*X + y*Y + z*Z) into its full coefficient table.

    Raises NotPositiveDefinite unless all three matrices are positive
    definite.  All coefficients of the result are positive; a violation
    beyond tolerance indicates an internal error and trips an assertion.
    """
    X, Y, Z = p
    exact = mode == "exact"
    if exact and not is_exact_matrix(X):
        raise ValueError("exact mode needs GaussianRational matrices")
    for m in (X, Y, Z):
        if not is_positive_definite(m, tol=pd_tol):
            raise NotPositiveDefinite("pencil matrices must be positive definite")
    n = X.shape[0]
    grid = _interp_grid(n)
    idxs = index_set(n)
    if exact:
        dets = []
        for (a, b) in grid:
            m = a * X + b * Y + Z  # object arrays broadcast GaussianRational ops
            d = exact_det(m)
            if d.im != 0:
                raise NotHermitian("determinant of Hermitian pencil must be real")
            dets.append(d.re)
        rows = [[Fraction(a) ** i * Fraction(b) ** j for (i, j, _k) in idxs]
                for (a, b) in grid]
        coeffs = _solve_exact(rows, dets)
        table = dict(zip(idxs, coeffs))
    else:
        # Cancellation-free expansion: whiten by Z, expand det over row
        # subsets, whiten each principal block by Y, and assemble every
        # coefficient as a positive combination of elementary symmetric
        # functions of positive eigenvalues.  Each table entry then has
        # *relative* float accuracy, which interpolation from a value grid
        # cannot deliver once the coefficients span many orders of magnitude.
        Xc = np.array(X, dtype=np.complex128)
        Yc = np.array(Y, dtype=np.complex128)
        Zc = np.array(Z, dtype=np.complex128)
        table = {idx: 0.0 for idx in idxs}
        lz = np.linalg.cholesky((Zc + Zc.conj().T) / 2)
        lzi = np.linalg.inv(lz)
        det_z = float(np.prod(np.abs(np.diag(lz)) ** 2))
        xt = lzi @ Xc @ lzi.conj().T
        yt = lzi @ Yc @ lzi.conj().T
        for bits in range(2 ** n):
            rows = [i for i in range(n) if bits >> i & 1]
            m = len(rows)
            if m == 0:
                table[(0, 0, n)] += 1.0
                continue
            sel = np.ix_(rows, rows)
            ys = yt[sel]
            ly = np.linalg.cholesky((ys + ys.conj().T) / 2)
            lyi = np.linalg.inv(ly)
            det_y = float(np.prod(np.abs(np.diag(ly)) ** 2))
            w = lyi @ xt[sel] @ lyi.conj().T
            mu = hermitian_eigenvalues((w + w.conj().T) / 2)
            elem = np.zeros(m + 1)
            elem[0] = 1.0
            for val in mu:
                val = max(val, 0.0)
                for a in range(m, 0, -1):
                    elem[a] += val * elem[a - 1]
            for a in range(m + 1):
                table[(a, m - a, n - m)] += det_y * elem[a]
        table = {idx: det_z * v for idx, v in table.items()}
        assert all(c > 0 for c in table.values()), \
            "positive-definite pencil produced a nonpositive coefficient"
    return TernaryForm(n, table)


def _solve_exact(rows, rhs):
    """Solve a square rational linear system by Gaussian elimination."""
    n = len(rows)
    a = [list(map(Fraction, row)) + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def beta_map(g, id_tol=1e-10, inv_tol=1e-12):
    """Positive-definite pencil (A*A, Id, (B^-1)* B^-1) from ABC = Id.

    The representative is canonical here; replacing the factorisation by a
    common right multiple conjugates the pencil and scales its determinant
    by a positive factor only.
    """
    A, B, C = g
    if is_exact_matrix(A):
        prod = A @ B @ C
        n = A.shape[0]
        for i in range(n):
            for j in range(n):
                want = GaussianRational(1 if i == j else 0)
                if prod[i, j] != want:
                    raise ProductNotIdentity("ABC must equal the identity exactly")
        binv = exact_inverse(B)
        X = conj_transpose(A) @ A
        Y = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                Y[i, j] = GaussianRational(1 if i == j else 0)
        Z = conj_transpose(binv) @ binv
        return PencilTriple(X, Y, Z)
    A = np.array(A, dtype=np.complex128)
    B = np.array(B, dtype=np.complex128)
    C = np.array(C, dtype=np.complex128)
    n = A.shape[0]
    for m in (A, B, C):
        sv = singular_values(m)
        if sv[-1] <= inv_tol * max(sv[0], 1.0):
            raise NotInvertible("GL triple entries must be invertible")
    scale = max(1.0, float(np.linalg.norm(A @ B @ C)))
    if np.linalg.norm(A @ B @ C - np.eye(n)) > id_tol * scale:
        raise ProductNotIdentity("ABC must equal the identity within tolerance")
    binv = np.linalg.inv(B)
    return PencilTriple(A.conj().T @ A, np.eye(n, dtype=np.complex128), binv.conj().T @ binv)


EDGES = ("xy", "yz", "zx")


def restrict_edge(form, which):
    """Univariate restriction along one coordinate line, descending coefficients.

    xy -> F(-1, u, 0); yz -> F(0, -1, u); zx -> F(u, 0, -1).
    """
    n = form.n
    c = form.coeffs
    if which == "xy":
        asc = [c[(n - j, j, 0)] * (-1) ** (n - j) for j in range(n + 1)]
    elif which == "yz":
        asc = [c[(0, n - k, k)] * (-1) ** (n - k) for k in range(n + 1)]
    elif which == "zx":
        asc = [c[(i, 0, n - i)] * (-1) ** (n - i) for i in range(n + 1)]
    else:
        raise ValueError(f"edge must be one of {EDGES}")
    return list(reversed(asc))


# ---------------------------------------------------------------------------
# real root counting: Sturm chains (exact) and companion matrices (float)
# ---------------------------------------------------------------------------

def _trim(poly):
    i = 0
    while i < len(poly) and poly[i] == 0:
        i += 1
    return poly[i:]


def _poly_rem(num, den):
    num = list(num)
    dd = len(den) - 1
    while len(num) - 1 >= dd and any(x != 0 for x in num):
        if num[0] == 0:
            num.pop(0)
            continue
        f = num[0] / den[0]
        for i in range(len(den)):
            num[i] -= f * den[i]
        num.pop(0)
    return _trim(num)


def _poly_deriv(poly):
    d = len(poly) - 1
    return [c * (d - i) for i, c in enumerate(poly[:-1])]


def _poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _poly_rem(a, b)
    return a


def _poly_div_exact(num, den):
    num = list(num)
    out = []
    while len(num) >= len(den):
        f = num[0] / den[0]
        out.append(f)
        for i in range(len(den)):
            num[i] -= f * den[i]
        num.pop(0)
    return out


def _squarefree(poly):
    d = _poly_gcd(poly, _poly_deriv(poly))
    if len(d) <= 1:
        return list(poly)
    return _poly_div_exact(poly, d)


def _sturm_chain(poly):
    chain = [list(poly), _poly_deriv(poly)]
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if c]


def _eval_poly(poly, x):
    acc = Fraction(0)
    for c in poly:
        acc = acc * x + c
    return acc


def _sign_variations_at(chain, x):
    signs = []
    for p in chain:
        v = _eval_poly(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_variations_at_inf(chain, positive):
    signs = []
    for p in chain:
        lead = p[0]
        deg = len(p) - 1
        s = 1 if lead > 0 else -1
        if not positive and deg % 2 == 1:
            s = -s
        signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(poly, interval=None):
    """Number of distinct real roots of a rational polynomial.

    ``interval=(a, b)`` counts roots in the half-open interval (a, b].
    """
    poly = _trim([Fraction(c) for c in poly])
    if not poly:
        raise ZeroPolynomial("cannot count roots of the zero polynomial")
    if len(poly) == 1:
        return 0
    sf = _squarefree(poly)
    if len(sf) == 1:
        return 0
    chain = _sturm_chain(sf)
    if interval is None:
        return (_sign_variations_at_inf(chain, False)
                - _sign_variations_at_inf(chain, True))
    a, b = Fraction(interval[0]), Fraction(interval[1])
    if a > b:
        raise ValueError("interval endpoints out of order")
    return _sign_variations_at(chain, a) - _sign_variations_at(chain, b)


def _cauchy_bound(poly):
    lead = abs(poly[0])
    return 1 + max(abs(c) / lead for c in poly[1:]) if len(poly) > 1 else Fraction(1)


def real_roots_exact(poly, bits=48):
    """Distinct real roots of a rational polynomial, as floats.

    Sturm isolation followed by bisection to width 2**-bits.
    """
    poly = _trim([Fraction(c) for c in poly])
    if not poly:
        raise ZeroPolynomial("zero polynomial")
    sf = _squarefree(poly)
    if len(sf) == 1:
        return []
    chain = _sturm_chain(sf)

    def count(a, b):
        return _sign_variations_at(chain, a) - _sign_variations_at(chain, b)

    bound = _cauchy_bound(sf)
    stack = [(-bound, bound)]
    isolated = []
    while stack:
        a, b = stack.pop()
        c = count(a, b)
        if c == 0:
            continue
        if c == 1:
            isolated.append((a, b))
            continue
        mid = (a + b) / 2
        if _eval_poly(sf, mid) == 0:
            isolated.append((mid, mid))
            eps = (b - a) / 2 ** 16
            stack.append((a, mid - eps))
            stack.append((mid + eps, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    roots = []
    for a, b in isolated:
        if a == b:
            roots.append(float(a))
            continue
        for _ in range(bits):
            if b - a < Fraction(1, 2 ** bits):
                break
            mid = (a + b) / 2
            if count(a, mid) == 1:
                b = mid
            else:
                a = mid
        roots.append(float((a + b) / 2))
    return sorted(roots)


def count_real_roots_float(coeffs, imag_tol=1e-9, cluster_tol=1e-9, interval=None):
    """Distinct real roots of float coefficients via companion eigenvalues."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    nz = np.nonzero(np.abs(coeffs) > 0)[0]
    if len(nz) == 0:
        raise ZeroPolynomial("cannot count roots of the zero polynomial")
    coeffs = coeffs[nz[0]:]
    if len(coeffs) == 1:
        return 0
    roots = np.roots(coeffs)
    scale = np.maximum(1.0, np.abs(roots))
    real = np.sort(roots[np.abs(roots.imag) <= imag_tol * scale].real)
    if interval is not None:
        real = real[(real > interval[0]) & (real <= interval[1])]
    count = 0
    last = None
    for r in real:
        if last is None or r - last > cluster_tol * max(1.0, abs(r)):
            count += 1
        last = r
    return count


def real_root_count(poly, interval=None, mode="float", imag_tol=1e-9, cluster_tol=1e-9):
    """Number of distinct real roots, by Sturm chain or companion matrix.

    Float mode resolves a multiplicity-m root only to ~eps^(1/m) (a double
    root can split into a pair ~1e-8 apart in either the real or imaginary
    direction); inputs with exact multiplicities belong in exact mode, or
    need tolerances matched to their scale.
    """
    if mode == "exact":
        return sturm_count(poly, interval)
    return count_real_roots_float(poly, imag_tol, cluster_tol, interval)


def _polish_roots(coeffs, roots, iterations=2):
    c = np.asarray(coeffs, dtype=np.float64)
    d = len(c) - 1
    dc = c[:-1] * np.arange(d, 0, -1)
    r = np.array(roots, dtype=np.float64)
    for _ in range(iterations):
        p = np.polyval(c, r)
        dp = np.polyval(dc, r)
        safe = np.abs(dp) > 0
        r[safe] = r[safe] - p[safe] / dp[safe]
    return r


def curve_boundary(form, real_tol=1e-7):
    """Square roots of the three edge-restriction root lists, each decreasing.

    For forms that arise from a positive-definite pencil the three lists are
    the singular values of the underlying GL factorisation.  Raises
    NonRealEdgeRoots naming the offending edge when a restriction has complex
    or non-positive roots.
    """
    out = []
    for edge in EDGES:
        coeffs = np.array([float(c) for c in restrict_edge(form, edge)])
        if abs(coeffs[0]) == 0:
            raise NonRealEdgeRoots(edge, f"edge {edge}: restriction drops degree")
        roots = np.roots(coeffs)
        scale = np.maximum(1.0, np.abs(roots))
        if np.any(np.abs(roots.imag) > real_tol * scale):
            raise NonRealEdgeRoots(edge)
        vals = _polish_roots(coeffs, roots.real)
        if np.any(vals <= 0):
            raise NonRealEdgeRoots(edge, f"edge {edge}: roots are not all positive")
        out.append(tuple(sorted((math.sqrt(v) for v in vals), reverse=True)))
    return tuple(out)
