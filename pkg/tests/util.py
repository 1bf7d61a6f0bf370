"""Shared random-matrix generators for the test suite."""

import numpy as np


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pd(rng, n, cond=100.0):
    """Random positive-definite Hermitian matrix with bounded condition number."""
    u = random_unitary(rng, n)
    lo, hi = 1.0 / np.sqrt(cond), np.sqrt(cond)
    ev = np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))
    return (u * ev) @ u.conj().T


def random_gl(rng, n, cond=100.0):
    """Random invertible matrix with singular-value spread bounded by cond."""
    u = random_unitary(rng, n)
    v = random_unitary(rng, n)
    lo, hi = 1.0 / np.sqrt(cond), np.sqrt(cond)
    sv = np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))
    return (u * sv) @ v.conj().T


def random_gl_triple(rng, n, cond=100.0):
    a = random_gl(rng, n, cond)
    b = random_gl(rng, n, cond)
    c = np.linalg.inv(a @ b)
    return a, b, c
