"""Liouville transform for barrier and well regions.

A chart normalizes the second-order equation around one barrier or one
finite well to the comparison form

    X'' = [ s hbar^{-2} (zeta^2 - gamma^2) + psi(zeta) ] X,   s = +-1

via a monotone map x <-> zeta fixed by  (dx/dzeta)^2 F(x) = zeta^2 - gamma^2
with F = s (mu^2 - A^2).  gamma is alpha (barrier, decreasing in mu) or beta
(well, increasing in mu); gamma = 0 is the critical chart of a coalesced
double turning point.  The error term psi is continuous across the turning
points; near them the naive formula is a difference of singular terms, so
the chart carries local series data that cancels the Laurent part
numerically and evaluates the finite remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.special import gammaln

from ._series import Series
from .quadrature import adaptive_panel, gl_panel, sqrt_edge_integral
from . import specfun

__all__ = [
    "LiouvilleChart",
    "ErrorTermSample",
    "build_chart",
    "zeta_of_x",
    "x_of_zeta",
    "error_term",
    "variation",
    "balance_bound_l1",
    "balance_bound_l2",
    "omega",
]

ACTION_TOL = 1e-11
ZETA_CAP_DEFAULT = 40.0
TABLE_N = 257


def omega(x):
    """Balancing weight 1 + |x|^{1/3}."""
    return 1.0 + np.abs(x) ** (1.0 / 3.0)


@dataclass(frozen=True)
class ErrorTermSample:
    zeta: float
    psi: float
    x: float
    f: float
    fp: float
    fpp: float
    g: float
    regularized: bool


@dataclass
class _SideTable:
    """Monotone (x, action, zeta) samples on one monotone piece of a chart."""

    xs: np.ndarray
    actions: np.ndarray  # cumulative |integral sqrt(|F|)| from the piece's anchor
    zetas: np.ndarray


@dataclass
class _TpSeries:
    """Regularized error-term data at one turning point."""

    x0: float
    mirror: float  # e = mirror * (x - x0), e > 0 on the outer side
    zeta0: float  # +-gamma (0 for a critical chart)
    sigma_of_e: Series  # zeta-offset as a series in e (outward positive)
    psi_reg: Series  # finite part of psi as a series in e
    e_near: float  # dispatch radius in e
    drop_scale: float  # magnitude of the cancelled Laurent coefficients


class LiouvilleChart:
    """Map, error term and variation machinery for one region at level mu."""

    def __init__(self, spec, mu, kind, index, x_lo, x_hi, tp_lo, tp_hi):
        self.spec = spec
        self.mu = float(mu)
        self.kind = kind  # "barrier" | "well"
        self.index = index
        self.sign = 1.0 if kind == "barrier" else -1.0
        self.x_domain = (x_lo, x_hi)
        self.tp = (tp_lo, tp_hi)
        self.critical = tp_hi - tp_lo < 1e-12
        if self.critical:
            self.gamma = 0.0
        else:
            area = sqrt_edge_integral(self._F, tp_lo, tp_hi, sing_a=True, sing_b=True, tol=ACTION_TOL)
            self.gamma = math.sqrt(2.0 * area / math.pi)
        self._tables = {}
        self._tp_series = {}
        self._psi_spline = None
        self.zeta_bounds = (self._edge_zeta("lo"), self._edge_zeta("hi"))

    # -- basic fields -------------------------------------------------------

    def _F(self, x):
        return self.sign * (self.mu**2 - np.asarray(self.spec(x)) ** 2)

    def _F_derivs(self, x):
        a, a1, a2 = self.spec.eval(x, order=2)
        F = self.sign * (self.mu**2 - a * a)
        Fp = self.sign * (-2.0 * a * a1)
        Fpp = self.sign * (-2.0 * (a1 * a1 + a * a2))
        return F, Fp, Fpp

    def _g(self, x):
        a, a1, a2 = self.spec.eval(x, order=2)
        d = a + self.mu
        return 0.75 * (a1 / d) ** 2 - 0.5 * a2 / d

    # -- closed-form comparison actions --------------------------------------

    def _G_center(self, zeta):
        g = self.gamma
        z = min(max(zeta, -g), g)
        return 0.5 * g * g * math.acos(-z / g) + 0.5 * z * math.sqrt(max(g * g - z * z, 0.0))

    def _G_outer(self, zeta_abs):
        """Action outside the turning points as a function of |zeta| >= gamma."""
        g = self.gamma
        if self.critical:
            return 0.5 * zeta_abs * zeta_abs
        r = max(zeta_abs / g, 1.0)
        return -0.5 * g * g * math.acosh(r) + 0.5 * zeta_abs * math.sqrt(max(zeta_abs**2 - g * g, 0.0))

    def _invert_G_center(self, target):
        g = self.gamma
        top = 0.5 * math.pi * g * g
        t = min(max(target, 0.0), top)
        if t <= 0.0:
            return -g
        if t >= top:
            return g
        return brentq(lambda z: self._G_center(z) - t, -g, g, xtol=1e-15, rtol=8.9e-16)

    def _invert_G_outer(self, target):
        if target <= 0.0:
            return self.gamma
        if self.critical:
            return math.sqrt(2.0 * target)
        g = self.gamma
        hi = max(2.0 * g, math.sqrt(2.0 * target + g * g * (1.0 + math.log1p(target / (g * g + 1.0)))), g + 1.0)
        while self._G_outer(hi) < target:
            hi *= 1.5
        return brentq(lambda z: self._G_outer(z) - target, g, hi, xtol=1e-15, rtol=8.9e-16)

    # -- forward tables -------------------------------------------------------

    def _edge_zeta(self, side):
        lo, hi = self.x_domain
        if side == "lo":
            if math.isinf(lo):
                return -math.inf
            act = sqrt_edge_integral(self._F, lo, self.tp[0], sing_b=not self.critical, tol=ACTION_TOL)
            return -self._invert_G_outer(act)
        if math.isinf(hi):
            return math.inf
        act = sqrt_edge_integral(self._F, self.tp[1], hi, sing_a=not self.critical, tol=ACTION_TOL)
        return self._invert_G_outer(act)

    def _x_cap(self, side, zeta_cap):
        """Finite x bound mapping at least to |zeta| = zeta_cap."""
        lo, hi = self.x_domain
        bound = lo if side == "lo" else hi
        if not math.isinf(bound):
            return bound
        target = self._G_outer(zeta_cap)
        tp = self.tp[0] if side == "lo" else self.tp[1]
        step = 1.0 + abs(tp)
        x = tp
        for _ in range(200):
            x = x - step if side == "lo" else x + step
            act = sqrt_edge_integral(self._F, min(x, tp), max(x, tp), sing_a=side == "hi", sing_b=side == "lo",
                                     tol=1e-9)
            if act >= target:
                return x
            step *= 1.7
        raise RuntimeError("failed to cap the chart tail")

    def _build_table(self, piece, zeta_cap):
        tp_lo, tp_hi = self.tp
        if piece == "center":
            if self.critical:
                raise RuntimeError("critical charts have no center piece")
            mid = 0.5 * (tp_lo + tp_hi)
            half = 0.5 * (tp_hi - tp_lo)
            k = np.arange(TABLE_N)
            xs = mid - half * np.cos(math.pi * k / (TABLE_N - 1))
            xs[0], xs[-1] = tp_lo, tp_hi
            acts = np.zeros_like(xs)
            area = 0.5 * math.pi * self.gamma**2
            for i in range(1, len(xs) - 1):
                seg = sqrt_edge_integral(self._F, xs[i - 1], xs[i], sing_a=(i == 1), tol=ACTION_TOL)
                acts[i] = acts[i - 1] + seg
            acts[-1] = area
            zetas = np.array([self._invert_G_center(a) for a in acts])
            zetas[0], zetas[-1] = -self.gamma, self.gamma
            return _SideTable(xs, acts, zetas)

        anchor = tp_hi if piece == "hi" else tp_lo
        cap = self._x_cap(piece, zeta_cap)
        span = abs(cap - anchor)
        ts = np.linspace(0.0, math.sqrt(span), TABLE_N) ** 2
        xs = anchor + ts if piece == "hi" else anchor - ts
        acts = np.zeros_like(xs)
        for i in range(1, len(xs)):
            a, b = (xs[i - 1], xs[i]) if piece == "hi" else (xs[i], xs[i - 1])
            seg = sqrt_edge_integral(self._F, a, b, sing_a=(piece == "hi" and i == 1),
                                     sing_b=(piece == "lo" and i == 1), tol=ACTION_TOL)
            acts[i] = acts[i - 1] + seg
        zetas = np.array([self._invert_G_outer(a) for a in acts])
        if piece == "lo":
            zetas = -zetas
        return _SideTable(xs, acts, zetas)

    def _table(self, piece, need_zeta=None):
        cap = self._tables.get("cap", ZETA_CAP_DEFAULT)
        if need_zeta is not None and abs(need_zeta) > cap:
            self._tables = {"cap": 1.5 * abs(need_zeta)}
            cap = self._tables["cap"]
        if piece not in self._tables:
            self._tables.setdefault("cap", cap)
            self._tables[piece] = self._build_table(piece, cap)
        return self._tables[piece]

    # -- public map ----------------------------------------------------------

    def zeta_of_x(self, x):
        x = float(x)
        lo, hi = self.x_domain
        if not (lo <= x <= hi):
            raise ValueError(f"x={x} outside the chart domain {self.x_domain}")
        tp_lo, tp_hi = self.tp
        if abs(x - tp_lo) < 1e-13:
            return -self.gamma
        if abs(x - tp_hi) < 1e-13:
            return self.gamma
        if x > tp_hi:
            act = self._act_from_table("hi", x)
            return self._invert_G_outer(act)
        if x < tp_lo:
            act = self._act_from_table("lo", x)
            return -self._invert_G_outer(act)
        act = self._act_from_table("center", x)
        return self._invert_G_center(act)

    def _act_from_table(self, piece, x):
        tab = self._table(piece)
        tp_lo, tp_hi = self.tp
        if piece == "hi":
            j = int(np.searchsorted(tab.xs, x)) - 1
            j = max(j, 0)
            if j >= len(tab.xs):
                j = len(tab.xs) - 1
            base_x, base_a = tab.xs[j], tab.actions[j]
            return base_a + self._segment(min(base_x, x), max(base_x, x), piece) * (1 if x >= base_x else -1)
        if piece == "lo":
            rev = tab.xs[::-1]  # ascending
            j = int(np.searchsorted(rev, x))
            j = min(max(j, 0), len(rev) - 1)
            idx = len(tab.xs) - 1 - j
            base_x, base_a = tab.xs[idx], tab.actions[idx]
            return base_a + self._segment(min(base_x, x), max(base_x, x), piece) * (1 if x <= base_x else -1)
        j = int(np.searchsorted(tab.xs, x)) - 1
        j = min(max(j, 0), len(tab.xs) - 1)
        base_x, base_a = tab.xs[j], tab.actions[j]
        return base_a + self._segment(min(base_x, x), max(base_x, x), piece) * (1 if x >= base_x else -1)

    def _segment(self, a, b, piece):
        if b <= a:
            return 0.0
        tp_lo, tp_hi = self.tp
        sing_a = abs(a - tp_hi) < 1e-13 or (piece == "center" and abs(a - tp_lo) < 1e-13)
        sing_b = abs(b - tp_lo) < 1e-13 or (piece == "center" and abs(b - tp_hi) < 1e-13)
        return sqrt_edge_integral(self._F, a, b, sing_a=sing_a, sing_b=sing_b, tol=ACTION_TOL)

    def x_of_zeta(self, zeta):
        zeta = float(zeta)
        z_lo, z_hi = self.zeta_bounds
        if not (z_lo <= zeta <= z_hi):
            raise ValueError(f"zeta={zeta} outside the chart range {self.zeta_bounds}")
        g = self.gamma
        if abs(zeta - g) < 1e-14:
            return self.tp[1]
        if abs(zeta + g) < 1e-14:
            return self.tp[0]
        if zeta > g:
            piece, target = "hi", self._G_outer(zeta)
        elif zeta < -g:
            piece, target = "lo", self._G_outer(-zeta)
        else:
            piece, target = "center", self._G_center(zeta)
        tab = self._table(piece, need_zeta=zeta)
        idx = np.searchsorted(tab.actions, target)
        idx = min(max(idx, 1), len(tab.actions) - 1)
        x0, x1 = sorted((tab.xs[idx - 1], tab.xs[idx]))

        def h(x):
            return self._act_from_table(piece, x) - target

        x = brentq(h, x0, x1, xtol=1e-13, rtol=8.9e-16)
        return float(x)

    # -- error term -----------------------------------------------------------

    def _tp_data(self, which):
        if which not in self._tp_series:
            self._tp_series[which] = self._make_tp_series(which)
        return self._tp_series[which]

    def _make_tp_series(self, which):
        x0 = self.tp[1] if which == "hi" else self.tp[0]
        m = 1.0 if which == "hi" else -1.0
        a, a1, a2, a3, a4 = self.spec.eval(x0, order=4)
        s = self.sign
        F1 = s * (-2.0 * a * a1)
        F2 = s * (-2.0 * (a1 * a1 + a * a2))
        F3 = s * (-2.0 * (3.0 * a1 * a2 + a * a3))
        F4 = s * (-2.0 * (3.0 * a2 * a2 + 4.0 * a1 * a3 + a * a4))
        phi = [0.0, m * F1, F2, m * F3, F4]  # d^k F / de^k at e = 0

        # g and its first two e-derivatives
        d = a + self.mu
        r = a1 / d
        rp = a2 / d - a1 * a1 / (d * d)
        rpp = a3 / d - 3.0 * a1 * a2 / (d * d) + 2.0 * a1**3 / d**3
        q1 = a3 / d - a2 * a1 / (d * d)
        q2 = a4 / d - 2.0 * a3 * a1 / (d * d) - a2 * a2 / (d * d) + 2.0 * a2 * a1 * a1 / d**3
        g0 = 0.75 * r * r - 0.5 * a2 / d
        g1 = m * (1.5 * r * rp - 0.5 * q1)
        g2 = 1.5 * (rp * rp + r * rpp) - 0.5 * q2
        g_ser = Series([g0, g1, 0.5 * g2])

        if self.critical:
            sigma, psi_reg, scale = self._critical_series(phi, g_ser)
            zeta0 = 0.0
        else:
            sigma, psi_reg, scale = self._simple_series(phi, g_ser)
            zeta0 = m * self.gamma

        if self.critical:
            width = math.sqrt(8.0 * self.mu / phi[2]) if phi[2] > 0 else 1.0
        else:
            width = min(self.tp[1] - self.tp[0], abs(2.0 * phi[1] / phi[2]) if phi[2] != 0.0 else math.inf)
        lo, hi = self.x_domain
        edge = (hi - x0) if which == "hi" else (x0 - lo)
        e_near = 0.004 * min(width, edge if math.isfinite(edge) else width)

        # The series is exact through order e; its e^2 and e^3 coefficients
        # would need A^(5), A^(6).  Fit them to the direct formula at a pair
        # of calibration points where that formula is still well conditioned.
        e_cal = 5.0 * e_near
        res = []
        for sgn in (1.0, -1.0):
            xc = x0 + m * sgn * e_cal
            zc = self.zeta_of_x(xc)
            res.append(self.psi_direct(xc, zc) - psi_reg(sgn * e_cal))
        coef = psi_reg.c.copy()
        coef[2] += (res[0] + res[1]) / (2.0 * e_cal**2)
        coef[3] += (res[0] - res[1]) / (2.0 * e_cal**3)
        psi_reg = Series(coef)
        return _TpSeries(x0, m, zeta0, sigma, psi_reg, e_near, scale)

    def _simple_series(self, phi, g_ser):
        gam = self.gamma
        F1s = Series([phi[1], phi[2] / 2.0, phi[3] / 6.0, phi[4] / 24.0])
        fp = Series([phi[1], phi[2], phi[3] / 2.0, phi[4] / 6.0])  # (dF/de)
        fpp = Series([phi[2], phi[3], phi[4] / 2.0])

        def p_weights(cs):
            out = np.zeros(len(cs.c))
            for k, ck in enumerate(cs.c):
                out[k] = 3.0 / (2.0 * k + 3.0) * ck
            return Series(out)

        c_f = (F1s * (1.0 / phi[1])).power(0.5)
        P = p_weights(c_f)
        wbar = Series([2.0 * gam, 1.0])  # w(sigma)/sigma
        c_w = (wbar * (1.0 / (2.0 * gam))).power(0.5)
        Pbar = p_weights(c_w)

        lam = (phi[1] / (2.0 * gam)) ** (1.0 / 3.0)
        e = Series.identity()
        rhs = e * P.power(2.0 / 3.0) * lam
        sigma = rhs
        for _ in range(10):
            sigma = rhs * Pbar.power(2.0 / 3.0).compose(sigma).inverse()

        W1 = (sigma * (2.0 * gam) + sigma * sigma).shift(-1)  # w(e)/e
        B = fp * fp * (-5.0) + (F1s.shift(1)) * fpp * 4.0  # 4 F F'' - 5 F'^2, over e
        Finv = F1s.inverse()
        T2 = W1 * B * Finv * Finv * Finv * (1.0 / 16.0)
        N1 = (sigma * sigma * 3.0 + sigma * (6.0 * gam) + 5.0 * gam * gam) * 0.25
        T1 = N1 * W1.inverse() * W1.inverse()
        S = T1 + T2
        scale = float(np.max(np.abs(T1.c[:3])) + np.max(np.abs(T2.c[:3])))
        T3 = W1 * g_ser * F1s.inverse()
        psi_reg = Series(S.c[2:]) + T3
        return sigma, psi_reg, max(abs(S.c[0]), abs(S.c[1])) / max(scale, 1e-300)

    def _critical_series(self, phi, g_ser):
        F2s = Series([phi[2] / 2.0, phi[3] / 6.0, phi[4] / 24.0])
        R = F2s.power(0.5)
        qc = np.zeros(len(R.c))
        for k, rk in enumerate(R.c):
            qc[k] = rk / (k + 2.0)
        Q = Series(qc)
        sigma_over_e = (Q * 2.0).power(0.5)
        sigma = Series.identity() * sigma_over_e
        V = sigma_over_e * sigma_over_e  # w(e)/e^2
        D1 = F2s * 2.0 + Series.identity() * F2s.deriv()
        D2 = D1 + Series.identity() * D1.deriv()
        B2 = F2s * D2 * 4.0 - D1 * D1 * 5.0
        T1 = V.inverse() * 0.75
        T2 = V * B2 * F2s.inverse() * F2s.inverse() * F2s.inverse() * (1.0 / 16.0)
        S = T1 + T2
        scale = float(np.max(np.abs(T1.c[:3])) + np.max(np.abs(T2.c[:3])))
        T3 = V * g_ser * F2s.inverse()
        psi_reg = Series(S.c[2:]) + T3
        return sigma, psi_reg, max(abs(S.c[0]), abs(S.c[1])) / max(scale, 1e-300)

    def psi_direct(self, x, zeta=None):
        """The error-term formula away from turning points."""
        if zeta is None:
            zeta = self.zeta_of_x(x)
        F, Fp, Fpp = self._F_derivs(x)
        g = self._g(x)
        w = zeta * zeta - self.gamma**2
        t1 = 0.25 * (3.0 * zeta * zeta + 2.0 * self.gamma**2) / (w * w)
        t2 = (w / (16.0 * F**3)) * (4.0 * F * Fpp - 5.0 * Fp * Fp)
        t3 = w * g / F
        return t1 + t2 + t3

    def error_term(self, zeta):
        zeta = float(zeta)
        z_lo, z_hi = self.zeta_bounds
        if not (z_lo < zeta < z_hi):
            raise ValueError(f"zeta={zeta} not strictly inside {self.zeta_bounds}")
        x = self.x_of_zeta(zeta)
        which = "hi" if zeta >= 0 else "lo"
        tp = self._tp_data(which)
        e = tp.mirror * (x - tp.x0)
        F, Fp, Fpp = self._F_derivs(x)
        g = self._g(x)
        if abs(e) <= tp.e_near:
            psi = tp.psi_reg(e)
            return ErrorTermSample(zeta, float(psi), x, float(F), float(Fp), float(Fpp), float(g), True)
        psi = self.psi_direct(x, zeta)
        return ErrorTermSample(zeta, float(psi), x, float(F), float(Fp), float(Fpp), float(g), False)

    # -- psi spline and variation ---------------------------------------------

    def psi_spline(self, z_lo, z_hi):
        """Cubic spline of psi over [z_lo, z_hi] (built from the tables)."""
        key = self._psi_spline
        if key is not None and key[0] <= z_lo and key[1] >= z_hi:
            return key[2]
        lo = max(z_lo, self.zeta_bounds[0] + 1e-9) if math.isfinite(self.zeta_bounds[0]) else z_lo
        hi = min(z_hi, self.zeta_bounds[1] - 1e-9) if math.isfinite(self.zeta_bounds[1]) else z_hi
        zs, ps = [], []
        for piece in (("center",) if not self.critical else ()) + ("lo", "hi"):
            tab = self._table(piece, need_zeta=max(abs(lo), abs(hi)))
            sel = (tab.zetas >= lo) & (tab.zetas <= hi)
            for x, z in zip(tab.xs[sel], tab.zetas[sel]):
                zs.append(z)
                ps.append(self._psi_at_node(x, z))
        # make sure the window edges and turning-point neighborhoods are covered
        for z in np.linspace(lo, hi, 257):
            zs.append(z)
            ps.append(self.error_term(z).psi)
        zs = np.asarray(zs)
        ps = np.asarray(ps)
        order = np.argsort(zs)
        zs, ps = zs[order], ps[order]
        keep = np.concatenate(([True], np.diff(zs) > 1e-12))
        spline = CubicSpline(zs[keep], ps[keep])
        self._psi_spline = (lo, hi, spline)
        return spline

    def _psi_at_node(self, x, zeta):
        for which in ("lo", "hi"):
            tp = self._tp_data(which)
            e = tp.mirror * (x - tp.x0)
            if abs(e) <= tp.e_near:
                return float(tp.psi_reg(e))
        return self.psi_direct(x, zeta)

    def variation(self, hbar, z_a, z_b, tol=1e-10):
        """integral |psi| / Omega(t sqrt(2/hbar)) over [z_a, z_b]."""
        if z_b < z_a:
            raise ValueError("variation needs z_a <= z_b")
        s = math.sqrt(2.0 / hbar)
        cap = ZETA_CAP_DEFAULT if not math.isfinite(z_b) else abs(z_b)
        z_hi = min(z_b, cap) if math.isfinite(z_b) else cap
        z_lo = max(z_a, -cap) if math.isfinite(z_a) else -cap
        if math.isfinite(self.zeta_bounds[1]):
            z_hi = min(z_hi, self.zeta_bounds[1] - 1e-9)
        if math.isfinite(self.zeta_bounds[0]):
            z_lo = max(z_lo, self.zeta_bounds[0] + 1e-9)
        spline = self.psi_spline(z_lo, z_hi)

        def f(t):
            return np.abs(spline(t)) / omega(t * s)

        total = 0.0
        pts = sorted({z_lo, z_hi, *(p for p in (-self.gamma, 0.0, self.gamma) if z_lo < p < z_hi)})
        for a, b in zip(pts[:-1], pts[1:]):
            total += adaptive_panel(f, a, b, tol)
        # analytic tails: psi ~ c/t^2 for decaying potentials
        if not math.isfinite(z_b) or z_b > cap:
            c2 = abs(float(spline(z_hi))) * z_hi * z_hi
            total += 0.75 * c2 * s ** (-1.0 / 3.0) * z_hi ** (-4.0 / 3.0)
        if not math.isfinite(z_a) or z_a < -cap:
            c2 = abs(float(spline(z_lo))) * z_lo * z_lo
            total += 0.75 * c2 * s ** (-1.0 / 3.0) * abs(z_lo) ** (-4.0 / 3.0)
        return total

    # -- csv ------------------------------------------------------------------

    def dump_rows(self, n=200):
        """(x, zeta, psi) rows across the chart for plotting."""
        z_lo = self.zeta_bounds[0] if math.isfinite(self.zeta_bounds[0]) else -min(4 * self.gamma + 10, 30)
        z_hi = self.zeta_bounds[1] if math.isfinite(self.zeta_bounds[1]) else min(4 * self.gamma + 10, 30)
        zs = np.linspace(z_lo + 1e-6, z_hi - 1e-6, n)
        rows = []
        for z in zs:
            s = self.error_term(z)
            rows.append((s.x, s.zeta, s.psi))
        return rows


# ---------------------------------------------------------------------------
# construction helpers


def build_chart(decomp, region, spec):
    """Build the Liouville chart for a region of an energy decomposition.

    ``region`` is ("barrier", i) or ("well", i) with i indexing into
    ``decomp.barriers`` / ``decomp.wells``.  Infinite wells are covered by
    the adjacent barrier chart, which is returned instead.  A zero-width
    (critical) barrier or a grazed well minimum yields the gamma = 0 chart.
    """
    kind, i = region
    mu = decomp.mu
    if kind == "barrier":
        if not 0 <= i < len(decomp.barriers):
            raise IndexError(f"no barrier {i}")
        tp_lo, tp_hi = decomp.barriers[i]
        x_lo = decomp.well_bottoms[i - 1][0] if i >= 1 else -math.inf
        x_hi = decomp.well_bottoms[i][0] if i < len(decomp.well_bottoms) else math.inf
        return LiouvilleChart(spec, mu, "barrier", i, x_lo, x_hi, tp_lo, tp_hi)
    if kind == "well":
        if not 0 <= i < len(decomp.wells):
            raise IndexError(f"no well {i}")
        lo, hi = decomp.wells[i]
        if math.isinf(lo):
            return build_chart(decomp, ("barrier", 0), spec)
        if math.isinf(hi):
            return build_chart(decomp, ("barrier", len(decomp.barriers) - 1), spec)
        tp_lo, tp_hi = lo, hi
        x_lo = decomp.barrier_tops[i - 1][0]
        x_hi = decomp.barrier_tops[i][0]
        return LiouvilleChart(spec, mu, "well", i, x_lo, x_hi, tp_lo, tp_hi)
    if kind == "critical-well":
        mins = [x for x, k in decomp.double_roots if k == "min"]
        if not 0 <= i < len(mins):
            raise IndexError(f"no grazed minimum {i}")
        x0 = mins[i]
        maxima = sorted(x for x, _, k in spec.extrema if k == "max")
        x_lo = max((x for x in maxima if x < x0), default=-math.inf)
        x_hi = min((x for x in maxima if x > x0), default=math.inf)
        return LiouvilleChart(spec, mu, "well", i, x_lo, x_hi, x0, x0)
    raise ValueError(f"unknown region kind {kind!r}")


def zeta_of_x(chart, x):
    return chart.zeta_of_x(x)


def x_of_zeta(chart, zeta):
    return chart.x_of_zeta(zeta)


def error_term(chart, zeta):
    return chart.error_term(zeta)


def variation(chart, hbar, z_a, z_b):
    return chart.variation(hbar, z_a, z_b)


def balance_bound_l1(c, n_grid=400):
    """l1(c) = sup_x Omega(x) M(x, c)^2 / Gamma(1/2 - c) for c <= 0."""
    if c > 0:
        raise ValueError("l1 needs c <= 0")
    x_sup = 4.0 * math.sqrt(-c) + 40.0 if c < 0 else 40.0
    xs = np.concatenate(([1e-6], np.geomspace(1e-3, x_sup, n_grid)))
    lg = gammaln(0.5 - c)
    best = 0.0
    for x in xs:
        m = specfun.pcf(float(x), c).modulus
        val = omega(x) * math.exp(2.0 * math.log(m) - lg)
        best = max(best, val)
    return best


def balance_bound_l2(c, n_grid=400):
    """l2(c) = sup_x Omega(x) Mbar(x, c)^2 for c >= 0."""
    if c < 0:
        raise ValueError("l2 needs c >= 0")
    x_sup = 4.0 * math.sqrt(c) + 40.0 if c > 0 else 40.0
    xs = np.concatenate(([1e-6], np.geomspace(1e-3, x_sup, n_grid)))
    best = 0.0
    for x in xs:
        m = specfun.mpcf(float(x), c).modulus
        best = max(best, omega(x) * m * m)
    return best
