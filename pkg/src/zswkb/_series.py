"""Fixed-order truncated power series with float coefficients.

Just enough arithmetic to regularize the Liouville error term at turning
points: the singular Laurent coefficients are assembled numerically and
cancelled, leaving the finite part.
"""

from __future__ import annotations

import numpy as np

ORDER = 8  # coefficients 0..ORDER


class Series:
    __slots__ = ("c",)

    def __init__(self, coef):
        c = np.zeros(ORDER + 1)
        coef = np.asarray(coef, dtype=float)
        n = min(len(coef), ORDER + 1)
        c[:n] = coef[:n]
        self.c = c

    @staticmethod
    def const(v):
        return Series([v])

    @staticmethod
    def identity():
        return Series([0.0, 1.0])

    def __add__(self, other):
        if isinstance(other, Series):
            return Series(self.c + other.c)
        out = self.c.copy()
        out[0] += other
        return Series(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Series):
            return Series(self.c - other.c)
        out = self.c.copy()
        out[0] -= other
        return Series(out)

    def __rsub__(self, other):
        return Series(-self.c) + other

    def __mul__(self, other):
        if isinstance(other, Series):
            out = np.convolve(self.c, other.c)[: ORDER + 1]
            return Series(out)
        return Series(self.c * other)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by t^k (k may be negative if low coefficients vanish)."""
        out = np.zeros(ORDER + 1)
        if k >= 0:
            out[k:] = self.c[: ORDER + 1 - k]
        else:
            out[: ORDER + 1 + k] = self.c[-k:]
        return Series(out)

    def inverse(self):
        """1/self; the constant coefficient must be nonzero."""
        a = self.c
        if a[0] == 0:
            raise ZeroDivisionError("series inverse needs a nonzero constant term")
        out = np.zeros(ORDER + 1)
        out[0] = 1.0 / a[0]
        for n in range(1, ORDER + 1):
            out[n] = -np.dot(a[1 : n + 1], out[n - 1 :: -1][:n]) / a[0]
        return Series(out)

    def power(self, p):
        """self**p for real p; the constant coefficient must be positive."""
        a = self.c
        if a[0] <= 0:
            raise ValueError("series power needs a positive constant term")
        out = np.zeros(ORDER + 1)
        out[0] = a[0] ** p
        # J.C.P. Miller recurrence
        for n in range(1, ORDER + 1):
            s = 0.0
            for k in range(1, n + 1):
                s += (k * p - (n - k)) * a[k] * out[n - k]
            out[n] = s / (n * a[0])
        return Series(out)

    def compose(self, inner):
        """self(inner(t)); inner must have zero constant term."""
        if inner.c[0] != 0.0:
            raise ValueError("series composition needs a zero inner constant term")
        out = Series.const(0.0)
        # Horner in the inner series
        for coef in self.c[::-1]:
            out = out * inner + coef
        return out

    def deriv(self):
        out = np.zeros(ORDER + 1)
        out[:-1] = self.c[1:] * np.arange(1, ORDER + 1)
        return Series(out)

    def __call__(self, t):
        return float(np.polynomial.polynomial.polyval(t, self.c))

    def __repr__(self):
        return f"Series({np.array2string(self.c, precision=6)})"
