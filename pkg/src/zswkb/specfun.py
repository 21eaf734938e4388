"""Airy, parabolic cylinder (PCF) and modified parabolic cylinder (mPCF) suites.

Conventions (all real arguments):

* ``U(x, b)``, ``Ubar(x, b)`` solve  w'' = (x^2/4 + b) w  (barrier comparison
  equation); the numerically satisfactory region is x >= 0, b <= 0 and the
  Wronskian is W[U, Ubar] = sqrt(2/pi) * Gamma(1/2 - b).
* ``W(x, b)``, ``W(-x, b)`` solve  w'' = (b - x^2/4) w  (well comparison
  equation) with W[W(.), W(-.)] = 1, used for b >= 0.
* Each pair carries a weight E, moduli M / N and phases theta / omega such
  that e.g. U = (M/E) sin(theta), Ubar = E M cos(theta).  Phases are returned
  on the principal branch; they match pi/4 at the crossing point by
  construction.

Evaluation goes through mpmath at elevated precision and is cached, so the
bundles are exact to double precision across the supported window
(|b| <= ~60, 0 <= x <= 2*sqrt(|b|) + 10; beyond that floats may overflow and
the log-space accessors must be used).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy.optimize import brentq
from scipy.special import airy as _scipy_airy
from scipy.special import gammaln, loggamma

__all__ = [
    "AiryBundle",
    "PcfBundle",
    "MpcfBundle",
    "airy",
    "airy_c_star",
    "pcf",
    "pcf_log",
    "pcf_at_zero",
    "pcf_wronskian",
    "log_pcf_wronskian",
    "mpcf",
    "mpcf_at_zero",
    "kappa",
    "log_kappa",
    "phase_shift",
    "crossing_root_pcf",
    "crossing_root_mpcf",
    "eta_variable",
    "pcf_uniform_airy",
    "mpcf_uniform_airy",
    "modulus_asymptotic",
    "modulus_bar_asymptotic",
]

_DPS = 32


# ---------------------------------------------------------------------------
# Airy


@lru_cache(maxsize=1)
def airy_c_star():
    """Biggest negative root of Ai(x) = Bi(x)  (~ -0.36605)."""
    return brentq(lambda t: _scipy_airy(t)[0] - _scipy_airy(t)[2], -1.0, 0.0, xtol=1e-14)


@dataclass(frozen=True)
class AiryBundle:
    ai: float
    bi: float
    dai: float
    dbi: float
    weight: float  # E
    modulus: float  # M
    phase: float  # theta


def airy(x):
    x = float(x)
    ai, dai, bi, dbi = _scipy_airy(x)
    c = airy_c_star()
    if x <= c:
        E = 1.0
    else:
        E = math.sqrt(bi / ai)
    a_, b_ = E * ai, bi / E
    return AiryBundle(ai, bi, dai, dbi, E, math.hypot(a_, b_), math.atan2(a_, b_))


# ---------------------------------------------------------------------------
# PCF pair U, Ubar


@lru_cache(maxsize=200_000)
def _pcf_raw(x, b):
    """(U, Ubar, U', Ubar') at (x, b) via mpmath, returned as mpf."""
    with mp.workdps(_DPS):
        xm, bm = mp.mpf(x), mp.mpf(b)
        if xm == 0:
            # mpmath's pcfv can fail right at the origin; closed forms instead
            half = mp.mpf("0.5")
            c0 = mp.power(mp.pi, -half) * mp.power(2, -(2 * bm + 1) / 4) * mp.gamma(mp.mpf("0.25") - bm / 2)
            c1 = mp.power(mp.pi, -half) * mp.power(2, -(2 * bm - 1) / 4) * mp.gamma(mp.mpf("0.75") - bm / 2)
            u = c0 * mp.sinpi(mp.mpf("0.25") - bm / 2)
            du = -c1 * mp.sinpi(mp.mpf("0.75") - bm / 2)
            ub = c0 * mp.sinpi(mp.mpf("0.75") - bm / 2)
            dub = -c1 * mp.sinpi(mp.mpf("1.25") - bm / 2)
            return u, ub, du, dub
        g = mp.gamma(mp.mpf("0.5") - bm)
        u = mp.pcfu(bm, xm)
        u1 = mp.pcfu(bm + 1, xm)
        v = mp.pcfv(bm, xm)
        v1 = mp.pcfv(bm + 1, xm)
        du = -(xm / 2) * u - (bm + mp.mpf("0.5")) * u1
        dv = -(xm / 2) * v + v1
        return u, g * v, du, g * dv


@dataclass(frozen=True)
class PcfBundle:
    x: float
    b: float
    u: float
    ubar: float
    du: float
    dubar: float
    weight: float  # E
    modulus: float  # M
    modulus_d: float  # N
    theta: float
    omega: float
    rho: float  # largest root of U = Ubar at this b


def pcf(x, b):
    """U, Ubar and auxiliaries at x >= 0, b <= 0.

    The auxiliary E/M/N/theta/omega are assembled in extended precision, so
    they stay finite even where U underflows or E overflows double precision.
    """
    x, b = float(x), float(b)
    if x < 0:
        raise ValueError("pcf requires x >= 0; reflect the argument at the call site")
    if b > 0:
        raise ValueError("pcf requires b <= 0")
    um, ubm, dum, dubm = _pcf_raw(x, b)
    rho = crossing_root_pcf(b)
    with mp.workdps(_DPS):
        if x <= rho:
            E = mp.mpf(1)
            su, cu = um, ubm
            so, co = dum, dubm
        else:
            E = mp.sqrt(ubm / um)
            su = cu = mp.sqrt(um * ubm)
            so, co = dum * E, dubm / E
        modulus = mp.sqrt(su * su + cu * cu)
        modulus_d = mp.sqrt(so * so + co * co)
        theta = mp.atan2(su, cu)
        omega = mp.atan2(so, co)
        vals = [float(v) for v in (um, ubm, dum, dubm, E, modulus, modulus_d, theta, omega)]
    return PcfBundle(x, b, *vals, rho=rho)


@dataclass(frozen=True)
class LogValue:
    sign: float
    log: float

    @property
    def value(self):
        return self.sign * math.exp(self.log)


def _to_logvalue(v):
    with mp.workdps(_DPS):
        if v == 0:
            return LogValue(0.0, -math.inf)
        return LogValue(float(mp.sign(v)), float(mp.log(abs(v))))


def pcf_log(x, b):
    """(U, Ubar, U', Ubar') as (sign, log|.|) pairs; safe for large |b|."""
    vals = _pcf_raw(float(x), float(b))
    return tuple(_to_logvalue(v) for v in vals)


def _sinpi(t):
    """sin(pi t) with exact zeros at integer t."""
    r = math.fmod(t, 2.0)
    if r < 0:
        r += 2.0
    if r == 0.0 or r == 1.0:
        return 0.0
    return math.sin(math.pi * r)


def pcf_at_zero(b):
    """Closed forms of U, U', Ubar, Ubar' at x = 0."""
    b = float(b)
    lg14 = gammaln(0.25 - 0.5 * b)
    lg34 = gammaln(0.75 - 0.5 * b)
    c0 = math.exp(lg14 - 0.25 * (2 * b + 1) * math.log(2.0)) / math.sqrt(math.pi)
    c1 = math.exp(lg34 - 0.25 * (2 * b - 1) * math.log(2.0)) / math.sqrt(math.pi)
    u0 = c0 * _sinpi(0.25 - 0.5 * b)
    du0 = -c1 * _sinpi(0.75 - 0.5 * b)
    ubar0 = c0 * _sinpi(0.75 - 0.5 * b)
    dubar0 = -c1 * _sinpi(1.25 - 0.5 * b)
    return u0, du0, ubar0, dubar0


def pcf_wronskian(b):
    """W[U(., b), Ubar(., b)] = sqrt(2/pi) Gamma(1/2 - b)."""
    return math.sqrt(2.0 / math.pi) * math.exp(gammaln(0.5 - float(b)))


def pcf_wronskian_residual(x, b):
    """Relative deviation of the numerical PCF Wronskian from its closed form.

    Evaluated in extended precision, so it stays meaningful when the
    individual factors overflow double precision.
    """
    u, ubar, du, dubar = _pcf_raw(float(x), float(b))
    with mp.workdps(_DPS):
        ref = mp.sqrt(2 / mp.pi) * mp.gamma(mp.mpf("0.5") - mp.mpf(b))
        return float(abs((u * dubar - du * ubar) - ref) / ref)


def mpcf_wronskian_residual(x, b):
    """Deviation of W[W(., b), W(-., b)] from 1, in extended precision."""
    w_p, w_m, dw_p, dw_m = _mpcf_raw(abs(float(x)), float(b))
    with mp.workdps(_DPS):
        return float(abs(w_p * dw_m - dw_p * w_m - 1))


def log_pcf_wronskian(b):
    return 0.5 * math.log(2.0 / math.pi) + gammaln(0.5 - float(b))


@lru_cache(maxsize=10_000)
def crossing_root_pcf(b):
    """rho(b): largest real root of U(x, b) = Ubar(x, b), b <= 0."""
    b = float(b)
    if b > 0:
        raise ValueError("rho(b) is defined for b <= 0")
    if b == 0.0:
        return 0.0

    def diff(x):
        u, ubar, _, _ = _pcf_raw(x, b)
        return float(u - ubar)

    # scan downward from beyond the turning point; the first sign change from
    # the right is the largest root.  Steps resolve the local Airy wavelength.
    hi = 2.0 * math.sqrt(-b) + 1.0
    while diff(hi) >= 0:
        hi += 1.0
    step = min(0.2, 0.25 * (1.0 - b) ** (-1.0 / 6.0))
    lo = hi - step
    steps = 0
    while diff(lo) <= 0:
        hi = lo
        lo = max(lo - step, 0.0)
        if lo == 0.0 and diff(0.0) <= 0:
            return 0.0
        steps += 1
        if steps > 4000:
            raise RuntimeError(f"failed to bracket rho({b})")
    return brentq(diff, lo, hi, xtol=1e-12)


# ---------------------------------------------------------------------------
# mPCF pair W(x, b), W(-x, b)


@lru_cache(maxsize=200_000)
def _mpcf_raw(x, b):
    """(W(x,b), W(-x,b), and d/dx of both as functions of x) as mpf.

    Uses the confluent-hypergeometric definition.  W spans a factor e^{pi b}
    between the two sides, so the working precision grows with b to absorb
    the cancellation.
    """
    with mp.workdps(_DPS + 8 + int(1.4 * abs(b))):
        xm, bm = mp.mpf(x), mp.mpf(b)
        ib2 = mp.mpc(0, 1) * bm / 2
        g14 = mp.gamma(mp.mpf("0.25") + ib2)
        g34 = mp.gamma(mp.mpf("0.75") + ib2)
        c1 = 2 ** mp.mpf("-0.75") * mp.sqrt(abs(g14) / abs(g34))
        c2 = 2 ** mp.mpf("-0.25") * mp.sqrt(abs(g34) / abs(g14))
        z = -mp.mpc(0, 1) * xm * xm / 2
        E = mp.exp(mp.mpc(0, 1) * xm * xm / 4)
        a1 = mp.mpf("0.25") + ib2
        a2 = mp.mpf("0.75") + ib2
        F1 = mp.hyp1f1(a1, mp.mpf("0.5"), z)
        F2 = mp.hyp1f1(a2, mp.mpf("1.5"), z)
        F1z = (a1 / mp.mpf("0.5")) * mp.hyp1f1(a1 + 1, mp.mpf("1.5"), z)
        F2z = (a2 / mp.mpf("1.5")) * mp.hyp1f1(a2 + 1, mp.mpf("2.5"), z)
        t1 = c1 * E * F1
        t2 = c2 * xm * E * F2
        dt1 = c1 * mp.mpc(0, 1) * xm * E * (F1 / 2 - F1z)
        dt2 = c2 * E * (F2 * (1 + mp.mpc(0, 1) * xm * xm / 2) - mp.mpc(0, 1) * xm * xm * F2z)
        w_p = mp.re(t1 - t2)
        w_m = mp.re(t1 + t2)
        dw_p = mp.re(dt1 - dt2)
        # 4th entry is d/dx applied to x -> W(-x, b), i.e. -W'(-x, b)
        dw_m = mp.re(dt1 + dt2)
        return w_p, w_m, dw_p, dw_m


@dataclass(frozen=True)
class MpcfBundle:
    x: float
    b: float
    w_plus: float  # W(x, b)
    w_minus: float  # W(-x, b)
    dw_plus: float  # d/dx W(x, b)
    dw_minus: float  # d/dx of t -> W(-t, b) evaluated at t = x
    k: float
    phi: float
    weight: float  # Ebar
    modulus: float  # Mbar
    modulus_d: float  # Nbar
    theta: float
    omega: float
    rho: float  # smallest nonnegative crossing root at this b


def mpcf(x, b):
    """W(+-x, b), derivatives and auxiliaries for b >= 0 (x of any sign)."""
    x, b = float(x), float(b)
    if b < 0:
        raise ValueError("mpcf requires b >= 0")
    w_pm, w_mm, dw_pm, dw_mm = _mpcf_raw(abs(x), b)
    if x < 0:
        w_pm, w_mm = w_mm, w_pm
        dw_pm, dw_mm = -dw_mm, -dw_pm
    kb = kappa(b)
    rho = crossing_root_mpcf(b)
    with mp.workdps(_DPS):
        rk = mp.exp(mp.mpf(log_kappa(b)) / 2)
        a_ = w_pm / rk
        b_ = rk * w_mm
        c_ = dw_pm / rk
        d_ = -rk * dw_mm
        if abs(x) <= rho and w_pm > 0 and w_mm > 0:
            E = mp.sqrt(rk * rk * w_mm / w_pm)
        else:
            E = mp.mpf(1)
        modulus = mp.sqrt((a_ * E) ** 2 + (b_ / E) ** 2)
        modulus_d = mp.sqrt((c_ * E) ** 2 + (d_ / E) ** 2)
        theta = mp.atan2(a_ * E, b_ / E)
        omega = mp.atan2(c_ * E, d_ / E)
        vals = [float(v) for v in (w_pm, w_mm, dw_pm, dw_mm)]
        aux = [float(v) for v in (E, modulus, modulus_d, theta, omega)]
    return MpcfBundle(x, b, *vals, k=kb, phi=phase_shift(b), weight=aux[0],
                      modulus=aux[1], modulus_d=aux[2], theta=aux[3], omega=aux[4], rho=rho)


def mpcf_at_zero(b):
    """W(0, b) and W'(0, b) closed forms."""
    b = float(b)
    lr = loggamma(0.25 + 0.5j * b).real - loggamma(0.75 + 0.5j * b).real
    w0 = 2.0**-0.75 * math.exp(0.5 * lr)
    dw0 = -(2.0**-0.25) * math.exp(-0.5 * lr)
    return w0, dw0


def kappa(b):
    """k(b) = sqrt(1 + e^{2 pi b}) - e^{pi b}, decreasing from 1 to 0."""
    return math.exp(log_kappa(b))


def log_kappa(b):
    b = float(b)
    # k = 1 / (sqrt(1 + e^{2 pi b}) + e^{pi b}) avoids cancellation for b > 0
    if b >= 0:
        return -(math.pi * b + math.log1p(math.sqrt(1.0 + math.exp(-2.0 * math.pi * b))))
    return math.log(math.sqrt(1.0 + math.exp(2.0 * math.pi * b)) - math.exp(math.pi * b))


def phase_shift(b):
    """phi(b) = pi/4 + (1/2) ph Gamma(1/2 + ib), continuous, phi(0) = pi/4."""
    return math.pi / 4 + 0.5 * loggamma(0.5 + 1j * float(b)).imag


@lru_cache(maxsize=10_000)
def crossing_root_mpcf(b):
    """rhobar(b): smallest x >= 0 with k^{-1/2} W(x,b) = k^{1/2} W(-x,b)."""
    b = float(b)
    if b < 0:
        raise ValueError("rhobar(b) is defined for b >= 0")
    kb = kappa(b)

    log_rk = 0.5 * log_kappa(b)

    def diff(x):
        w_p, w_m, _, _ = _mpcf_raw(x, b)
        # k^{-1/2} W(x) - k^{1/2} W(-x), rescaled by k^{1/2} (same sign)
        return float(w_p) - math.exp(2.0 * log_rk) * float(w_m)

    # positive throughout [0, rhobar); first sign change from the left.
    # The crossing sits just past the turning point 2 sqrt(b); start scanning
    # shortly before it to skip the long monotone stretch.
    tp = 2.0 * math.sqrt(b)
    lo = max(tp - 1.0, 0.0)
    if diff(lo) <= 0:
        lo = 0.0
    step = min(0.2, 0.25 * (1.0 + b) ** (-1.0 / 6.0))
    x = lo + step
    steps = 0
    while diff(x) > 0:
        lo = x
        x += step
        steps += 1
        if steps > 4000:
            raise RuntimeError(f"failed to bracket rhobar({b})")
    return brentq(diff, lo, x, xtol=1e-12)


# ---------------------------------------------------------------------------
# Uniform large-parameter (Airy-type) asymptotics and modulus tails


def eta_variable(y):
    """Turning-point variable eta(y) of the large-parameter regime."""
    y = float(y)
    if y < 0:
        raise ValueError("eta is defined for y >= 0")
    if y >= 1.0:
        val = 0.5 * y * math.sqrt(y * y - 1.0) - 0.5 * math.acosh(y)
        return (1.5 * val) ** (2.0 / 3.0)
    val = 0.5 * (math.acos(y) - y * math.sqrt(1.0 - y * y))
    return -((1.5 * val) ** (2.0 / 3.0))


def pcf_uniform_airy(y, nu):
    """Airy-form approximations of U, Ubar at x = nu y sqrt(2), b = -nu^2/2."""
    y, nu = float(y), float(nu)
    eta = eta_variable(y)
    arg = nu ** (4.0 / 3.0) * eta
    ai, _, bi, _ = _scipy_airy(arg)
    ratio = eta / (y * y - 1.0) if y != 1.0 else 2.0 ** (-2.0 / 3.0)
    pref = math.exp(0.5 * gammaln(0.5 + 0.5 * nu * nu)) * math.sqrt(2.0) * math.pi**0.25 / nu ** (1.0 / 6.0)
    return pref * ratio**0.25 * ai, pref * ratio**0.25 * bi


def mpcf_uniform_airy(y, nu):
    """Airy-form approximations of k^{-1/2} W(x, b) and k^{1/2} W(-x, b)
    at x = nu y sqrt(2), b = +nu^2/2."""
    y, nu = float(y), float(nu)
    eta = eta_variable(y)
    arg = -(nu ** (4.0 / 3.0)) * eta
    ai, _, bi, _ = _scipy_airy(arg)
    ratio = eta / (y * y - 1.0) if y != 1.0 else 2.0 ** (-2.0 / 3.0)
    pref = 2.0**0.25 * math.sqrt(math.pi) / nu ** (1.0 / 6.0)
    return pref * ratio**0.25 * bi, pref * ratio**0.25 * ai


def modulus_asymptotic(x, b):
    """Large-x forms of M(x,b), N(x,b): M ~ (8/pi)^{1/4} sqrt(G)/sqrt(x)."""
    x, b = float(x), float(b)
    g = math.exp(0.5 * gammaln(0.5 - b))
    return (8.0 / math.pi) ** 0.25 * g / math.sqrt(x), g * math.sqrt(x) / (2.0 * math.pi) ** 0.25


def modulus_bar_asymptotic(x):
    """Large-|x| forms of Mbar, Nbar."""
    x = abs(float(x))
    return math.sqrt(2.0 / x), math.sqrt(x / 2.0)
