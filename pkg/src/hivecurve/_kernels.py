"""Hot numeric kernels with numba and pure-numpy implementations.

Three kernels dominate the float-path runtime: restriction of a ternary form
to a batch of lines, batched companion-matrix root extraction, and the cyclic
Jacobi eigenvalue sweep for complex Hermitian matrices.  Each has a loop
implementation (compiled when the numba backend is active) and a vectorised
numpy implementation; ``benchmarks/bench_kernels.py`` compares the two.
"""

import math

import numpy as np

from ._backend import USE_NUMBA, njit_or_python


# ---------------------------------------------------------------------------
# line restriction: univariate coefficients of F(base + s*dir) per direction
# ---------------------------------------------------------------------------

def _restrict_lines_loop(coeffs, exps, base, dirs, binom):
    # out[p, r] is the coefficient of s^(n-r)  (descending, np.roots order)
    nprobe = dirs.shape[0]
    nterm = exps.shape[0]
    n = 0
    for m in range(nterm):
        d = exps[m, 0] + exps[m, 1] + exps[m, 2]
        if d > n:
            n = d
    out = np.zeros((nprobe, n + 1))
    for p in range(nprobe):
        dx, dy, dz = dirs[p, 0], dirs[p, 1], dirs[p, 2]
        bx, by, bz = base[0], base[1], base[2]
        for m in range(nterm):
            i, j, k = exps[m, 0], exps[m, 1], exps[m, 2]
            w = coeffs[m]
            for a in range(i + 1):
                ca = binom[i, a] * bx ** (i - a) * dx ** a
                for b in range(j + 1):
                    cb = binom[j, b] * by ** (j - b) * dy ** b
                    for c in range(k + 1):
                        cc = binom[k, c] * bz ** (k - c) * dz ** c
                        out[p, n - (a + b + c)] += w * ca * cb * cc
    return out


def _restrict_lines_numpy(coeffs, exps, base, dirs, binom):
    nprobe = dirs.shape[0]
    n = int(exps.sum(axis=1).max())
    out = np.zeros((nprobe, n + 1))
    # per-axis power tables, shape (nprobe, n+1)
    dpow = np.ones((3, nprobe, n + 1))
    for ax in range(3):
        for e in range(1, n + 1):
            dpow[ax, :, e] = dpow[ax, :, e - 1] * dirs[:, ax]
    bpow = np.ones((3, n + 1))
    for ax in range(3):
        for e in range(1, n + 1):
            bpow[ax, e] = bpow[ax, e - 1] * base[ax]
    for m in range(exps.shape[0]):
        i, j, k = int(exps[m, 0]), int(exps[m, 1]), int(exps[m, 2])
        w = coeffs[m]
        for a in range(i + 1):
            ca = binom[i, a] * bpow[0, i - a] * dpow[0, :, a]
            for b in range(j + 1):
                cb = binom[j, b] * bpow[1, j - b] * dpow[1, :, b]
                for c in range(k + 1):
                    cc = binom[k, c] * bpow[2, k - c] * dpow[2, :, c]
                    out[:, n - (a + b + c)] += w * ca * cb * cc
    return out


# ---------------------------------------------------------------------------
# batched polynomial roots via companion matrices
# ---------------------------------------------------------------------------

def _polyroots_batch_loop(rows):
    # rows: (m, d+1) float64, descending powers, rows[:, 0] != 0
    m, w = rows.shape
    d = w - 1
    out = np.zeros((m, d), dtype=np.complex128)
    for r in range(m):
        comp = np.zeros((d, d), dtype=np.complex128)
        lead = rows[r, 0]
        for c in range(d):
            comp[0, c] = -rows[r, c + 1] / lead
        for c in range(d - 1):
            comp[c + 1, c] = 1.0
        out[r, :] = np.linalg.eigvals(comp)
    return out


def _polyroots_batch_numpy(rows):
    m, w = rows.shape
    d = w - 1
    comp = np.zeros((m, d, d), dtype=np.complex128)
    comp[:, 0, :] = -rows[:, 1:] / rows[:, :1]
    idx = np.arange(d - 1)
    comp[:, idx + 1, idx] = 1.0
    return np.linalg.eigvals(comp)


# ---------------------------------------------------------------------------
# cyclic Jacobi for complex Hermitian matrices
# ---------------------------------------------------------------------------

def _jacobi_hermitian_loop(a, tol_off, max_sweeps):
    # a: (n, n) complex128 Hermitian copy (mutated); returns (diag, off, sweeps)
    n = a.shape[0]
    sweeps = 0
    off = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                off += abs(a[i, j]) ** 2
    off = math.sqrt(off)
    while off > tol_off and sweeps < max_sweeps:
        for p in range(n):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                u = apq / r
                alpha = a[p, p].real
                beta = a[q, q].real
                tau = (beta - alpha) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for i in range(n):
                    if i != p and i != q:
                        aip = a[i, p]
                        aiq = a[i, q]
                        a[i, p] = c * aip - s * np.conj(u) * aiq
                        a[i, q] = s * u * aip + c * aiq
                        a[p, i] = np.conj(a[i, p])
                        a[q, i] = np.conj(a[i, q])
                app = c * c * alpha - 2.0 * s * c * r + s * s * beta
                aqq = s * s * alpha + 2.0 * s * c * r + c * c * beta
                a[p, p] = app
                a[q, q] = aqq
                a[p, q] = 0.0
                a[q, p] = 0.0
        sweeps += 1
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += abs(a[i, j]) ** 2
        off = math.sqrt(off)
    diag = np.zeros(n)
    for i in range(n):
        diag[i] = a[i, i].real
    return diag, off, sweeps


if USE_NUMBA:
    restrict_lines = njit_or_python(_restrict_lines_loop)
    polyroots_batch = njit_or_python(_polyroots_batch_loop)
    jacobi_hermitian = njit_or_python(_jacobi_hermitian_loop)
else:
    restrict_lines = _restrict_lines_numpy
    polyroots_batch = _polyroots_batch_numpy
    jacobi_hermitian = _jacobi_hermitian_loop


def binomial_table(n):
    """Pascal triangle as a float array, shape (n+1, n+1)."""
    t = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        t[i, 0] = 1.0
        for j in range(1, i + 1):
            t[i, j] = t[i - 1, j - 1] + (t[i - 1, j] if j <= i - 1 else 0.0)
    return t
