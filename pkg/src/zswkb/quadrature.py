"""Quadrature helpers for integrands with square-root turning-point edges.

Integrands of the form sqrt(|F|) or 1/sqrt(|F|) with a simple zero of F at an
interval endpoint are transformed with x = a + t^2 (or the mirror), which
restores smoothness and spectral accuracy of Gauss-Legendre panels.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["gl_panel", "adaptive_panel", "sqrt_edge_integral", "inv_sqrt_edge_integral"]


@lru_cache(maxsize=8)
def _gl(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gl_panel(f, a, b, n=48):
    """Gauss-Legendre integral of a vectorized callable over [a, b]."""
    x, w = _gl(n)
    h = 0.5 * (b - a)
    return h * float(np.dot(w, f(a + h * (x + 1.0))))


def adaptive_panel(f, a, b, tol=1e-12, depth=0, n=48):
    """Bisecting Gauss-Legendre with an embedded error estimate."""
    coarse = gl_panel(f, a, b, n=n // 2)
    fine = gl_panel(f, a, b, n=n)
    if abs(fine - coarse) <= tol * max(1.0, abs(fine)) or depth >= 24:
        return fine
    m = 0.5 * (a + b)
    half = 0.5 * tol
    return adaptive_panel(f, a, m, half, depth + 1, n) + adaptive_panel(f, m, b, half, depth + 1, n)


def sqrt_edge_integral(F, a, b, sing_a=False, sing_b=False, tol=1e-12):
    """integral_a^b sqrt(|F(x)|) dx, F having a simple zero at flagged ends."""
    if b <= a:
        return 0.0

    def plain(x):
        return np.sqrt(np.abs(F(x)))

    total = 0.0
    lo, hi = a, b
    if sing_a and sing_b:
        mid = 0.5 * (a + b)
        return sqrt_edge_integral(F, a, mid, True, False, tol) + sqrt_edge_integral(F, mid, b, False, True, tol)
    if sing_a:
        cut = min(b, a + 0.25 * (b - a))

        def sub(t):
            return 2.0 * t * np.sqrt(np.abs(F(a + t * t)))

        total += adaptive_panel(sub, 0.0, np.sqrt(cut - a), tol)
        lo = cut
    if sing_b:
        cut = max(a, b - 0.25 * (b - a))

        def sub(t):
            return 2.0 * t * np.sqrt(np.abs(F(b - t * t)))

        total += adaptive_panel(sub, 0.0, np.sqrt(b - cut), tol)
        hi = cut
    if hi > lo:
        total += adaptive_panel(plain, lo, hi, tol)
    return total


def inv_sqrt_edge_integral(F, a, b, sing_a=False, sing_b=False, tol=1e-12):
    """integral_a^b |F(x)|^{-1/2} dx with the same edge handling."""
    if b <= a:
        return 0.0
    if sing_a and sing_b:
        mid = 0.5 * (a + b)
        return inv_sqrt_edge_integral(F, a, mid, True, False, tol) + inv_sqrt_edge_integral(
            F, mid, b, False, True, tol
        )

    def plain(x):
        return 1.0 / np.sqrt(np.abs(F(x)))

    total = 0.0
    lo, hi = a, b
    if sing_a:
        cut = min(b, a + 0.25 * (b - a))

        def sub(t):
            return 2.0 * t / np.sqrt(np.abs(F(a + t * t)))

        total += adaptive_panel(sub, 0.0, np.sqrt(cut - a), tol)
        lo = cut
    if sing_b:
        cut = max(a, b - 0.25 * (b - a))

        def sub(t):
            return 2.0 * t / np.sqrt(np.abs(F(b - t * t)))

        total += adaptive_panel(sub, 0.0, np.sqrt(b - cut), tol)
        hi = cut
    if hi > lo:
        total += adaptive_panel(plain, lo, hi, tol)
    return total
