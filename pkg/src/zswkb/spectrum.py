"""Actions, Bohr-Sommerfeld quantization and the limiting eigenvalue density.

Each finite barrier carries an action

    Phi_l(mu) = integral over the barrier of sqrt(A^2 - mu^2) dx,

strictly decreasing in mu with Phi_l' = -mu * integral (A^2-mu^2)^{-1/2}.
A WKB eigenvalue is i Phi_l^{-1}(pi (n + 1/2) hbar); the rescaled counting
measure of all of them converges to the continuous density

    rho(i mu) = (i mu / pi) * sum_l integral_(barrier l) (A^2-mu^2)^{-1/2} dx.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .potential import decompose, validate_assumptions
from .quadrature import inv_sqrt_edge_integral, sqrt_edge_integral

__all__ = [
    "ActionProfile",
    "WkbEigenvalue",
    "DensitySample",
    "action",
    "action_derivative",
    "invert_action",
    "enumerate_wkb",
    "norming_constant",
    "density",
    "counting_check",
    "formation_threshold",
    "klaus_shaw_count",
]

QUANT_TOL = 1e-10


def _barrier_at(spec, mu, x_top):
    """Barrier interval of decompose(spec, mu) containing the top x_top."""
    d = decompose(spec, mu)
    for lo, hi in d.barriers:
        if lo - 1e-12 <= x_top <= hi + 1e-12:
            return lo, hi
    raise ValueError(f"no barrier containing x={x_top} at mu={mu}")


def action(spec, decomp, ell, mu=None):
    """Phi_ell(mu); ell indexes decomp.barriers, mu defaults to decomp.mu."""
    x_top, a_top = decomp.barrier_tops[ell]
    mu = decomp.mu if mu is None else float(mu)
    if mu >= a_top:
        raise ValueError(f"mu={mu} at or above the barrier maximum {a_top}")
    if mu <= 0:
        raise ValueError("mu must be positive")
    lo, hi = (decomp.barriers[ell] if mu == decomp.mu else _barrier_at(spec, mu, x_top))

    def F(x):
        return np.asarray(spec(x)) ** 2 - mu * mu

    return sqrt_edge_integral(F, lo, hi, sing_a=True, sing_b=True, tol=1e-12)


def action_derivative(spec, decomp, ell, mu=None):
    """d Phi_ell / d mu = -mu * integral (A^2 - mu^2)^{-1/2} < 0."""
    x_top, a_top = decomp.barrier_tops[ell]
    mu = decomp.mu if mu is None else float(mu)
    if mu >= a_top:
        raise ValueError(f"mu={mu} at or above the barrier maximum {a_top}")
    lo, hi = (decomp.barriers[ell] if mu == decomp.mu else _barrier_at(spec, mu, x_top))

    def F(x):
        return np.asarray(spec(x)) ** 2 - mu * mu

    return -mu * inv_sqrt_edge_integral(F, lo, hi, sing_a=True, sing_b=True, tol=1e-11)


@dataclass
class ActionProfile:
    """Monotone table mu -> Phi_ell(mu) over one barrier's validity window."""

    spec: object
    x_top: float
    mu_lo: float
    mu_hi: float  # the barrier maximum, Phi -> 0 there
    mus: np.ndarray
    phis: np.ndarray

    def __call__(self, mu):
        lo, hi = _barrier_at(self.spec, mu, self.x_top)

        def F(x):
            return np.asarray(self.spec(x)) ** 2 - mu * mu

        return sqrt_edge_integral(F, lo, hi, sing_a=True, sing_b=True, tol=1e-12)


def build_action_profile(spec, decomp, ell, mu_lo=None, n_nodes=129):
    """Tabulate Phi_ell on (mu_lo, barrier max) with refinement near the top."""
    x_top, a_top = decomp.barrier_tops[ell]
    if mu_lo is None:
        adj = []
        if ell - 1 >= 0 and ell - 1 < len(decomp.well_bottoms):
            adj.append(decomp.well_bottoms[ell - 1][1])
        if ell < len(decomp.well_bottoms):
            adj.append(decomp.well_bottoms[ell][1])
        mu_lo = max(adj) if adj else 1e-3 * a_top
    k = np.arange(n_nodes)
    base = 0.5 * (mu_lo + a_top) - 0.5 * (a_top - mu_lo) * np.cos(math.pi * k / (n_nodes - 1))
    near_top = a_top - (a_top - mu_lo) * 1e-3 * 2.0 ** -np.arange(6)
    mus = np.unique(np.clip(np.concatenate([base[1:-1], near_top]), mu_lo * (1 + 1e-12), a_top * (1 - 1e-12)))
    prof = ActionProfile(spec, x_top, mu_lo, a_top, mus, np.zeros_like(mus))
    prof.phis = np.array([prof(m) for m in mus])
    return prof


def invert_action(profile, s):
    """mu with Phi(mu) = s, bracketed through the profile's monotone table."""
    phis, mus = profile.phis, profile.mus
    if not (phis[-1] <= s <= phis[0] or phis[0] <= s <= phis[-1]):
        lo_val, hi_val = min(phis[0], phis[-1]), max(phis[0], phis[-1])
        raise ValueError(f"action value {s} outside the profile range [{lo_val}, {hi_val}]")
    idx = int(np.searchsorted(-phis, -s))  # phis decreasing in mu
    idx = min(max(idx, 1), len(mus) - 1)
    a, b = mus[idx - 1], mus[idx]
    if (profile(a) - s) * (profile(b) - s) > 0:
        a, b = profile.mu_lo * (1 + 1e-12), profile.mu_hi * (1 - 1e-12)
    mu = brentq(lambda m: profile(m) - s, a, b, xtol=1e-13, rtol=8.9e-16)
    return float(mu)


@dataclass(frozen=True)
class WkbEigenvalue:
    ell: int  # barrier index, 1-based, within the decomposition at mu
    n: int  # quantum number
    mu: float
    lam: complex
    norming_sign: int
    n_barriers: int  # L(mu) of the decomposition this label refers to
    tail_unverified: bool = False

    @property
    def residual_target(self):
        return math.pi * (self.n + 0.5)


def norming_constant(ev):
    """Leading norming-constant value (-1)^n."""
    return -1 if ev.n % 2 else 1


def _strata(spec, window):
    lo, hi = window
    lo = max(lo, 1e-9 * spec.amax)
    hi = min(hi, spec.amax)
    cuts = sorted({lo, hi, *(a for _, a, _ in spec.extrema if lo < a < hi)})
    return list(zip(cuts[:-1], cuts[1:]))


def enumerate_wkb(spec, hbar, window=(0.0, None)):
    """All WKB eigenvalues i Phi_l^{-1}(pi (n+1/2) hbar) with mu in window.

    Candidates from different barriers are kept as distinct (ell, n) records
    even when their mu nearly coincide.  Eigenvalues below the lowest well
    minimum get the tail-unverified flag unless the potential passes the
    near-zero decay check.
    """
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    w_lo, w_hi = window
    if w_hi is None:
        w_hi = spec.amax
    out = []
    if w_hi <= 0 or w_lo >= spec.amax:
        return out

    minima = [a for _, a, k in spec.extrema if k == "min"]
    m_tilde = min(minima) if minima else spec.amax
    near_zero_ok = validate_assumptions(spec).near_zero_ok

    decomp_cache = {}

    def dec(mu):
        if mu not in decomp_cache:
            decomp_cache[mu] = decompose(spec, mu)
        return decomp_cache[mu]

    eps_rel = 1e-9
    for lo, hi in _strata(spec, (w_lo, w_hi)):
        span = hi - lo
        mu_a, mu_b = lo + eps_rel * span, hi - eps_rel * span
        d_mid = dec(0.5 * (lo + hi))
        for i in range(len(d_mid.barriers)):
            x_top, a_top = d_mid.barrier_tops[i]
            if d_mid.barriers[i][1] - d_mid.barriers[i][0] < 1e-12:
                continue  # grazed maximum, zero-width

            def phi(mu, x_top=x_top):
                lo_b, hi_b = _barrier_at(spec, mu, x_top)
                return sqrt_edge_integral(
                    lambda x: np.asarray(spec(x)) ** 2 - mu * mu, lo_b, hi_b, sing_a=True, sing_b=True, tol=1e-12
                )

            phi_hi, phi_lo_val = phi(mu_a), phi(mu_b)  # phi decreasing: phi(mu_a) > phi(mu_b)
            n_min = max(0, math.ceil(phi_lo_val / (math.pi * hbar) - 0.5 + 1e-12))
            n_max = math.floor(phi_hi / (math.pi * hbar) - 0.5 - 1e-12)
            for n in range(n_min, n_max + 1):
                target = math.pi * (n + 0.5) * hbar
                mu = brentq(lambda m: phi(m) - target, mu_a, mu_b, xtol=1e-13, rtol=8.9e-16)
                flag = mu < m_tilde and not near_zero_ok
                out.append(
                    WkbEigenvalue(
                        ell=i + 1,
                        n=n,
                        mu=float(mu),
                        lam=1j * mu,
                        norming_sign=-1 if n % 2 else 1,
                        n_barriers=len(d_mid.barriers),
                        tail_unverified=flag,
                    )
                )
    out.sort(key=lambda ev: -ev.mu)
    return out


def formation_threshold(spec):
    """Largest hbar with any bound state: hbar < 2 ||A||_1 / pi."""
    return 2.0 * spec.l1_norm / math.pi


def klaus_shaw_count(spec, hbar):
    """Lower bound N on the number of purely imaginary eigenvalues."""
    n = 0
    while spec.l1_norm / hbar > (2 * n + 1) * math.pi / 2.0:
        n += 1
    return n


@dataclass(frozen=True)
class DensitySample:
    mu: float
    lam: complex
    rho: complex  # purely imaginary on the open segment
    per_barrier: tuple
    n_barriers: int
    at_critical_level: bool = False
    rho_other_side: complex = None


def _density_at(spec, mu):
    d = decompose(spec, mu)
    per = []
    for lo, hi in d.barriers:
        if hi - lo < 1e-12:
            per.append(0.0)
            continue
        val = inv_sqrt_edge_integral(
            lambda x: np.asarray(spec(x)) ** 2 - mu * mu, lo, hi, sing_a=True, sing_b=True, tol=1e-10
        )
        per.append(mu * val / math.pi)
    return per, len(d.barriers)


def density(spec, mu_grid):
    """Samples of rho(i mu) = (i mu/pi) sum_l int dx / sqrt(A^2 - mu^2).

    Grid points within tolerance of a critical level are evaluated from both
    sides and reported with the discontinuity attached.
    """
    crit = sorted(a for _, a, _ in spec.extrema)
    out = []
    for mu in np.atleast_1d(mu_grid):
        mu = float(mu)
        if not 0.0 < mu < spec.amax:
            raise ValueError(f"density grid point {mu} outside (0, A_max)")
        near = [c for c in crit if abs(c - mu) < 1e-9 * spec.amax]
        if near:
            eps = 1e-6 * spec.amax
            per_lo, n_lo = _density_at(spec, mu - eps)
            per_hi, n_hi = _density_at(spec, mu + eps)
            out.append(
                DensitySample(
                    mu=mu,
                    lam=1j * mu,
                    rho=1j * sum(per_lo),
                    per_barrier=tuple(per_lo),
                    n_barriers=n_lo,
                    at_critical_level=True,
                    rho_other_side=1j * sum(per_hi),
                )
            )
            continue
        per, nb = _density_at(spec, mu)
        out.append(DensitySample(mu=mu, lam=1j * mu, rho=1j * sum(per), per_barrier=tuple(per), n_barriers=nb))
    return out


def counting_check(evs, samples, hbar):
    """Sup gap between the empirical integrated measure and integral of rho.

    The empirical measure weights each WKB eigenvalue by hbar; the predicted
    count above mu is the cumulative integral of |rho| from mu to A_max over
    the sample grid.
    """
    mus = np.array([s.mu for s in samples])
    rho = np.array([abs(s.rho.imag) for s in samples])
    order = np.argsort(mus)
    mus, rho = mus[order], rho[order]
    # cumulative integral from above
    seg = 0.5 * (rho[1:] + rho[:-1]) * np.diff(mus)
    cum_above = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
    ev_mus = np.sort([ev.mu for ev in evs])
    gaps = []
    for mu, pred in zip(mus, cum_above):
        emp = hbar * float(np.sum(ev_mus >= mu))
        gaps.append(abs(emp - pred))
    i = int(np.argmax(gaps))
    return {"sup_gap": float(gaps[i]), "at_mu": float(mus[i]), "gaps": np.array(gaps), "grid": mus}
