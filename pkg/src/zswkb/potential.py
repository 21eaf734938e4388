"""Multi-humped decaying potentials and their barrier/well decomposition.

A potential is a positive function A(x) on the real line, decaying at both
infinities, with finitely many local extrema.  At an energy level mu the
line splits into an alternating sequence

    well_0 | barrier_1 | well_1 | ... | barrier_L | well_L

where A > mu strictly inside each barrier and A < mu inside each well.
The outermost wells are infinite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

__all__ = [
    "PotentialSpec",
    "EnergyDecomposition",
    "AssumptionReport",
    "make_potential",
    "load_potential",
    "eval_with_derivatives",
    "decompose",
    "validate_assumptions",
]

ROOT_TOL = 1e-12
# a root is double when mu sits this close (relative to A_max) to an extremum value
DOUBLE_ROOT_RTOL = 1e-9

_FAMILIES = (
    "sech-scaled",
    "lorentzian-sum",
    "rational-decay",
    "exponential-decay",
    "user-sampled-with-spline",
)


def _sech_derivs(u):
    """sech(u) and its first four u-derivatives."""
    u = np.clip(u, -350.0, 350.0)  # sech underflows to 0 there anyway
    s = 1.0 / np.cosh(u)
    t = np.tanh(u)
    d0 = s
    d1 = -s * t
    d2 = s * (1.0 - 2.0 * s**2)
    d3 = s * t * (6.0 * s**2 - 1.0)
    d4 = s * (24.0 * s**4 - 20.0 * s**2 + 1.0)
    return d0, d1, d2, d3, d4


def _lorentz_derivs(u):
    q = 1.0 + u * u
    d0 = 1.0 / q
    d1 = -2.0 * u / q**2
    d2 = (6.0 * u * u - 2.0) / q**3
    d3 = 24.0 * u * (1.0 - u * u) / q**4
    d4 = 24.0 * (5.0 * u**4 - 10.0 * u * u + 1.0) / q**5
    return d0, d1, d2, d3, d4


def _rational_derivs(u, p):
    q = 1.0 + u * u
    d0 = q**-p
    d1 = -2.0 * p * u * q ** (-p - 1)
    d2 = -2.0 * p * q ** (-p - 1) + 4.0 * p * (p + 1) * u * u * q ** (-p - 2)
    d3 = 12.0 * p * (p + 1) * u * q ** (-p - 2) - 8.0 * p * (p + 1) * (p + 2) * u**3 * q ** (-p - 3)
    d4 = (
        12.0 * p * (p + 1) * q ** (-p - 2)
        - 48.0 * p * (p + 1) * (p + 2) * u * u * q ** (-p - 3)
        + 16.0 * p * (p + 1) * (p + 2) * (p + 3) * u**4 * q ** (-p - 4)
    )
    return d0, d1, d2, d3, d4


def _gauss_derivs(u):
    e = np.exp(-u * u)
    d0 = e
    d1 = -2.0 * u * e
    d2 = (4.0 * u * u - 2.0) * e
    d3 = (12.0 * u - 8.0 * u**3) * e
    d4 = (16.0 * u**4 - 48.0 * u * u + 12.0) * e
    return d0, d1, d2, d3, d4


@dataclass
class TailInfo:
    """Declared decay data: power class A ~ |x|^-r .. |x|^-s, or exponential class."""

    decay_class: str = "power"  # "power" | "exponential"
    r: float = 2.0
    s: float = 2.0
    tau: float = 1.0


@dataclass
class PotentialSpec:
    kind: str
    params: dict
    tail: TailInfo
    amax: float = 0.0
    x_amax: float = 0.0
    l1_norm: float = 0.0
    # critical points as (x, A(x), kind) with kind "max" | "min", sorted in x
    extrema: tuple = ()
    _spline: object = field(default=None, repr=False)

    def __call__(self, x):
        return self.eval(x, order=0)

    def eval(self, x, order=0):
        """A(x) and derivatives up to the requested order (0..4).

        Returns a single array for order=0, else a tuple of arrays.
        """
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise ValueError("potential evaluated at non-finite x")
        if order < 0 or order > 4:
            raise ValueError("derivative order must be 0..4")
        if self.kind == "user-sampled-with-spline":
            xs = self.params["x"]
            xc = np.clip(x, xs[0], xs[-1])  # hold edge values instead of spline extrapolation
            out = [self._spline.derivative(k)(xc) if k else self._spline(xc) for k in range(order + 1)]
        else:
            out = [np.zeros_like(x) for _ in range(5)]
            for amp, cen, wid, extra in self._terms():
                u = (x - cen) / wid
                if self.kind == "sech-scaled":
                    ds = _sech_derivs(u)
                elif self.kind == "lorentzian-sum":
                    ds = _lorentz_derivs(u)
                elif self.kind == "rational-decay":
                    ds = _rational_derivs(u, extra)
                elif self.kind == "exponential-decay":
                    ds = _gauss_derivs(u)
                else:
                    raise ValueError(f"unknown family {self.kind!r}")
                for k in range(5):
                    out[k] = out[k] + amp * ds[k] / wid**k
            out = out[: order + 1]
        if order == 0:
            return out[0]
        return tuple(out)

    def _terms(self):
        amps = np.atleast_1d(np.asarray(self.params["amplitudes"], dtype=float))
        cens = np.atleast_1d(np.asarray(self.params.get("centers", np.zeros_like(amps)), dtype=float))
        wids = np.atleast_1d(np.asarray(self.params.get("widths", np.ones_like(amps)), dtype=float))
        extras = np.atleast_1d(np.asarray(self.params.get("powers", np.ones_like(amps)), dtype=float))
        return list(zip(amps, cens, wids, extras))

    def scan_halfwidth(self, mu):
        """X with A(|x| >= X) < mu/100, from the declared tail; root scans stay inside."""
        total_amp = self.amax if self.amax > 0 else 1.0
        target = mu / 100.0
        if self.tail.decay_class == "exponential":
            x = (np.log(max(total_amp, 1.0) / target)) ** (1.0 / max(self.tail.r, 0.1)) + 1.0
        else:
            x = (max(total_amp, 1.0) / target) ** (1.0 / self.tail.r) + 1.0
        spread = self._span()
        x = max(2.0 * spread + 5.0, x + spread)
        # the tail estimate is asymptotic only; grow until actually below target
        for _ in range(200):
            if self(np.array(x)) < target:
                break
            x *= 1.5
        return float(x)

    def _span(self):
        if self.kind == "user-sampled-with-spline":
            xs = self.params["x"]
            return float(max(abs(xs[0]), abs(xs[-1])))
        terms = self._terms()
        return max(abs(c) + 3.0 * w for _, c, w, _ in terms)


def _find_extrema(spec):
    """Critical points of A by sign changes of A' on a fine grid."""
    x_hi = spec._span() * 3.0 + 10.0
    xs = np.linspace(-x_hi, x_hi, 20001)
    xs += (np.sqrt(2.0) - 1.0) * (xs[1] - xs[0])  # keep grid nodes off exact critical points
    _, d1 = spec.eval(xs, order=1)
    sign = np.sign(d1)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    crit = []
    for i in idx:
        xr = brentq(lambda t: spec.eval(t, order=1)[1], xs[i], xs[i + 1], xtol=1e-13)
        a, _, d2 = spec.eval(xr, order=2)
        kind = "max" if d2 < 0 else "min"
        crit.append((float(xr), float(a), kind))
    return tuple(crit)


_DEFAULT_TAILS = {
    "sech-scaled": TailInfo("exponential", 1.0, 1.0, np.inf),
    "lorentzian-sum": TailInfo("power", 2.0, 2.0, 1.0),
    "exponential-decay": TailInfo("exponential", 2.0, 2.0, np.inf),
}


def make_potential(kind, params, tail=None):
    """Build a PotentialSpec with cached maximum, L1 norm and extrema."""
    if kind not in _FAMILIES:
        raise ValueError(f"unknown potential family {kind!r}; expected one of {_FAMILIES}")
    if tail is None:
        if kind == "rational-decay":
            p = float(np.min(params.get("powers", [1.0])))
            tail = TailInfo("power", 2.0 * p, 2.0 * p, 2.0 * p - 1.0)
        elif kind == "user-sampled-with-spline":
            tail = TailInfo("power", 2.0, 2.0, 1.0)
        else:
            tail = _DEFAULT_TAILS[kind]
    spec = PotentialSpec(kind=kind, params=dict(params), tail=tail)
    if kind == "user-sampled-with-spline":
        from scipy.interpolate import CubicSpline

        xs = np.asarray(params["x"], dtype=float)
        ys = np.asarray(params["values"], dtype=float)
        if np.any(ys <= 0):
            raise ValueError("sampled potential must be strictly positive")
        spec._spline = CubicSpline(xs, ys, bc_type="natural")

    spec.extrema = _find_extrema(spec)
    maxima = [(x, a) for x, a, k in spec.extrema if k == "max"]
    if not maxima:
        raise ValueError("potential has no interior maximum")
    x0, a0 = max(maxima, key=lambda p: p[1])
    spec.x_amax, spec.amax = x0, a0
    if kind == "user-sampled-with-spline":
        xs = np.asarray(params["x"], dtype=float)
        spec.l1_norm = quad(lambda t: float(spec(t)), xs[0], xs[-1], limit=400)[0]
    else:
        x_cut = spec._span() * 4.0 + 50.0
        core = quad(lambda t: float(spec(t)), -x_cut, x_cut, points=[0.0], limit=400)[0]
        left = quad(lambda t: float(spec(t)), -np.inf, -x_cut, limit=400)[0]
        right = quad(lambda t: float(spec(t)), x_cut, np.inf, limit=400)[0]
        spec.l1_norm = core + left + right
    return spec


def load_potential(source):
    """Read a potential definition from a TOML/JSON file or a dict.

    Schema: {family, params: {amplitudes, centers, widths, powers},
             tail: {class, r, s, tau}}.
    """
    if isinstance(source, dict):
        cfg = source
    else:
        path = Path(source)
        text = path.read_text()
        if path.suffix == ".json":
            cfg = json.loads(text)
        else:
            try:
                import tomllib  # py >= 3.11
            except ModuleNotFoundError:
                import tomli as tomllib
            cfg = tomllib.loads(text)
    try:
        family = cfg["family"]
        params = cfg["params"]
    except KeyError as exc:
        raise ValueError(f"potential config missing field {exc}") from exc
    tail = None
    if "tail" in cfg:
        t = cfg["tail"]
        tail = TailInfo(
            decay_class=t.get("class", "power"),
            r=float(t.get("r", 2.0)),
            s=float(t.get("s", t.get("r", 2.0))),
            tau=float(t.get("tau", 1.0)),
        )
    return make_potential(family, params, tail)


def eval_with_derivatives(spec, x):
    """A, A', A'' at x (exact for the analytic families)."""
    a, d1, d2 = spec.eval(x, order=2)
    return a, d1, d2


@dataclass
class EnergyDecomposition:
    """Turning points and the alternating barrier/well structure at level mu.

    ``roots`` holds the simple roots x_1^- < x_1^+ < ... < x_L^- < x_L^+.
    ``barriers[l]`` is (x_{l+1}^-, x_{l+1}^+) (0-based list, paper index l+1);
    ``wells`` has L+1 entries, the first and last extending to -inf/+inf.
    Double (critical) roots are kept separately with multiplicity flags.
    """

    mu: float
    roots: np.ndarray
    barriers: list
    wells: list
    barrier_tops: list  # (x, A(x)) per barrier
    well_bottoms: list  # (x, A(x)) per finite well, index l matching wells[1..L-1]
    double_roots: list  # (x, "max"|"min") where mu grazes an extremum
    critical: bool

    @property
    def n_barriers(self):
        return len(self.barriers)


def decompose(spec, mu):
    """Split the line into barriers and wells at level mu.

    mu == A_max (within the double-root tolerance) gives the critical
    decomposition with a coalesced top; mu > A_max is an error.
    """
    mu = float(mu)
    if not 0.0 < mu:
        raise ValueError("energy level mu must be positive")
    if mu > spec.amax * (1.0 + DOUBLE_ROOT_RTOL):
        raise ValueError(f"mu={mu} exceeds the potential maximum {spec.amax}; no barrier")

    tol_double = DOUBLE_ROOT_RTOL * spec.amax
    double_roots = [(x, k) for x, a, k in spec.extrema if abs(a - mu) <= tol_double]
    grazed = {x for x, _ in double_roots}

    x_cut = spec.scan_halfwidth(mu)
    # scan nodes: extrema split the line into monotone pieces; refine each piece
    nodes = [-x_cut] + [x for x, _, _ in spec.extrema] + [x_cut]
    roots = []
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        if hi in grazed or lo in grazed:
            continue  # grazing extremum: no simple crossing on this side
        flo = float(spec(lo)) - mu
        fhi = float(spec(hi)) - mu
        if flo * fhi < 0:
            xr = brentq(lambda t: float(spec(t)) - mu, lo, hi, xtol=1e-14, rtol=8.9e-16)
            # polish to push |A(x)-mu| itself below tolerance
            for _ in range(3):
                a, d1 = spec.eval(xr, order=1)
                if abs(a - mu) < ROOT_TOL or d1 == 0:
                    break
                xr -= (a - mu) / d1
            roots.append(float(xr))
    roots = np.array(sorted(roots))
    if len(roots) % 2 != 0:
        raise RuntimeError(f"odd number of simple roots at mu={mu}; scan failure")

    barriers = [(roots[2 * i], roots[2 * i + 1]) for i in range(len(roots) // 2)]
    # a grazed maximum is a barrier suppressed to a point: keep it, zero width
    for x0, k in double_roots:
        if k == "max":
            barriers.append((x0, x0))
    barriers.sort()
    wells = []
    if barriers:
        wells.append((-np.inf, barriers[0][0]))
        for (_, r0), (l1, _) in zip(barriers[:-1], barriers[1:]):
            wells.append((r0, l1))
        wells.append((barriers[-1][1], np.inf))
    else:
        wells.append((-np.inf, np.inf))

    barrier_tops = []
    for lo, hi in barriers:
        if lo == hi:
            barrier_tops.append((lo, float(spec(lo))))
            continue
        cands = [(x, a) for x, a, k in spec.extrema if k == "max" and lo < x < hi]
        barrier_tops.append(max(cands, key=lambda p: p[1]))
    well_bottoms = []
    for lo, hi in wells[1:-1]:
        cands = [(x, a) for x, a, k in spec.extrema if k == "min" and lo < x < hi]
        well_bottoms.append(min(cands, key=lambda p: p[1]))

    return EnergyDecomposition(
        mu=mu,
        roots=roots,
        barriers=barriers,
        wells=wells,
        barrier_tops=barrier_tops,
        well_bottoms=well_bottoms,
        double_roots=double_roots,
        critical=bool(double_roots),
    )


@dataclass
class AssumptionReport:
    positive: bool
    min_value: float
    n_extrema: int
    n_maxima: int
    n_minima: int
    decay_class: str
    fitted_exponent: float  # power class: slope of log A vs log|x|; exp class: of log A vs |x|^r
    declared_tail: TailInfo
    tail_consistent: bool
    near_zero_ok: bool  # 2r - s > 1/3 (power) or exponential class
    messages: list

    @property
    def all_ok(self):
        return self.positive and self.tail_consistent and self.near_zero_ok


def validate_assumptions(spec):
    """Check positivity, extremum count, tail decay and the near-zero window."""
    msgs = []
    span = spec._span()
    xs = np.linspace(-3 * span - 20, 3 * span + 20, 4001)
    vals = spec(xs)
    positive = bool(np.all(vals > 0))
    if not positive:
        msgs.append("A(x) <= 0 somewhere on the scan grid")

    n_max = sum(1 for _, _, k in spec.extrema if k == "max")
    n_min = sum(1 for _, _, k in spec.extrema if k == "min")

    # tail exponent fit on a window far outside the humps
    lo, hi = span + 10.0, 10.0 * (span + 10.0)
    ts = np.geomspace(lo, hi, 200)
    avg = 0.5 * (spec(ts) + spec(-ts))
    if spec.tail.decay_class == "exponential":
        r = spec.tail.r
        coef = np.polyfit(ts**r, np.log(avg), 1)
        fitted = -coef[0]
        consistent = fitted > 0
        if not consistent:
            msgs.append("tail does not decay exponentially as declared")
        near_zero_ok = True
    else:
        coef = np.polyfit(np.log(ts), np.log(avg), 1)
        fitted = -coef[0]
        consistent = abs(fitted - (1.0 + spec.tail.tau)) < 0.35 or abs(fitted - spec.tail.r) < 0.35
        if not consistent:
            msgs.append(f"fitted tail exponent {fitted:.3f} vs declared r={spec.tail.r}, tau={spec.tail.tau}")
        near_zero_ok = (2.0 * spec.tail.r - spec.tail.s) > 1.0 / 3.0
        if not near_zero_ok:
            msgs.append("near-zero condition 2r - s > 1/3 fails; eigenvalues below the lowest well minimum are unverified")

    return AssumptionReport(
        positive=positive,
        min_value=float(vals.min()),
        n_extrema=len(spec.extrema),
        n_maxima=n_max,
        n_minima=n_min,
        decay_class=spec.tail.decay_class,
        fitted_exponent=float(fitted),
        declared_tail=spec.tail,
        tail_consistent=bool(consistent),
        near_zero_ok=bool(near_zero_ok),
        messages=msgs,
    )
