"""Checks of the asymptotic claims: weak residual, L1 distance, entropy
inequalities, Oleinik admissibility, the superposition lemma, and log-log
rate fitting over an eps sweep.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._numerics import adaptive_gk, gauss_legendre
from .mollifier import default_table
from .solution import ReferenceSolution

EPS_SWEEP = (0.1, 0.05, 0.025, 0.0125)
NOISE_FLOOR = 1e-14


class VerificationError(ValueError):
    pass


# -- test functions -----------------------------------------------------------

class TestFunction:
    """C-infinity bump exp(-1/(1 - r^2)), r = (x - center)/width, scaled to peak 1."""

    __test__ = False  # not a pytest class

    def __init__(self, center, width, name=""):
        if not width > 0:
            raise VerificationError("width must be positive")
        self.center, self.width, self.name = float(center), float(width), name

    @property
    def support(self):
        return self.center - self.width, self.center + self.width

    def _r(self, x):
        return (np.asarray(x, dtype=float) - self.center) / self.width

    def __call__(self, x):
        r = self._r(x)
        inside = np.abs(r) < 1
        d = np.where(inside, 1.0 - r * r, 1.0)
        return np.where(inside, np.exp(1.0 - 1.0 / d), 0.0)

    def prime(self, x):
        r = self._r(x)
        inside = np.abs(r) < 1
        d = np.where(inside, 1.0 - r * r, 1.0)
        return np.where(inside, np.exp(1.0 - 1.0 / d) * (-2.0 * r / d**2) / self.width, 0.0)

    def integral(self):
        lo, hi = self.support
        return adaptive_gk(self, lo, hi, atol=1e-14, rtol=1e-14)[0]


class EntropyPair:
    """Convex entropy eta with flux Q(u) = int_k^u eta'(v) f'(v) dv by Gauss-Legendre."""

    def __init__(self, kind, k, flux, delta=0.0, n_nodes=48):
        if kind not in ("quadratic", "kruzhkov", "linear"):
            raise VerificationError(f"unknown entropy kind {kind!r}")
        if kind == "kruzhkov" and not delta > 0:
            raise VerificationError("smoothed Kruzhkov entropy needs delta > 0")
        self.kind, self.k, self.flux, self.delta = kind, float(k), flux, float(delta)
        self._nodes, self._weights = gauss_legendre(n_nodes)

    @property
    def name(self):
        return self.kind

    def eta(self, u):
        v = np.asarray(u, dtype=float) - self.k
        if self.kind == "quadratic":
            return v * v
        if self.kind == "kruzhkov":
            return np.sqrt(v * v + self.delta**2)
        return v

    def eta_prime(self, u):
        v = np.asarray(u, dtype=float) - self.k
        if self.kind == "quadratic":
            return 2.0 * v
        if self.kind == "kruzhkov":
            return v / np.sqrt(v * v + self.delta**2)
        return np.ones_like(v)

    def eta_second(self, u):
        v = np.asarray(u, dtype=float) - self.k
        if self.kind == "quadratic":
            return 2.0 * np.ones_like(v)
        if self.kind == "kruzhkov":
            return self.delta**2 / (v * v + self.delta**2) ** 1.5
        return np.zeros_like(v)

    def Q(self, u):
        u = np.asarray(u, dtype=float)
        v = self.k + (u - self.k)[..., None] * self._nodes
        integrand = self.eta_prime(v) * self.flux.df(v)
        return (u - self.k) * (integrand @ self._weights)


def quadratic_entropy(s):
    return EntropyPair("quadratic", s.mid_state, s.flux)


def kruzhkov_entropy(s, rel_delta=0.05):
    return EntropyPair("kruzhkov", s.mid_state, s.flux, delta=rel_delta * (s.U - s.u0_0))


# -- rate fitting ---------------------------------------------------------------

@dataclass
class ConvergenceReport:
    epsilons: list
    values: list
    slope: float
    intercept: float
    residual: float
    below_noise_floor: bool = False
    monotone: bool = True

    def passes(self, min_slope=0.8, require_monotone=True):
        if self.below_noise_floor:
            return True
        return self.slope >= min_slope and (self.monotone or not require_monotone)


def fit_rate(pairs):
    """Least-squares slope of log(value) against log(eps)."""
    pairs = sorted(((float(e), abs(float(v))) for e, v in pairs), reverse=True)
    if len(pairs) < 3:
        raise VerificationError("fit_rate needs at least 3 (eps, value) pairs")
    eps = np.array([p[0] for p in pairs])
    vals = np.array([p[1] for p in pairs])
    if np.all(vals < NOISE_FLOOR):
        return ConvergenceReport(eps.tolist(), vals.tolist(), float("inf"), float("nan"),
                                 0.0, below_noise_floor=True, monotone=True)
    logv = np.log(np.maximum(vals, NOISE_FLOOR))
    coef, res, *_ = np.polyfit(np.log(eps), logv, 1, full=True)
    # eps is sorted decreasing, so the metric must decrease along the list
    # values at the noise floor count as zero and may repeat
    mono = bool(np.all((vals[1:] < vals[:-1]) | (vals[1:] < NOISE_FLOOR)))
    return ConvergenceReport(eps.tolist(), vals.tolist(), float(coef[0]), float(coef[1]),
                             float(res[0]) if len(res) else 0.0, monotone=mono)


# -- weak residual ----------------------------------------------------------------

def time_step(s, eps):
    """Centered-difference step in t: eps^2 t*, capped at 1e-4 t*."""
    return min(eps * eps, 1e-4) * s.t_star


def _front_points(sol, t):
    pr = sol.at(float(t))
    return [pr.phi1, pr.phi2] + ReferenceSolution(sol.s).kinks(t)


def weak_residual(sol, t, eta, h=None, atol=1e-11):
    """<d_t u_eps, eta> - <f(u_eps), eta'>, the pairing of the PDE residual with eta."""
    s = sol.s
    h = time_step(s, sol.eps) if h is None else h
    if t - h < 0 or t + h > 2.0 * s.t_star:
        raise VerificationError(f"t={t} too close to the ends of [0, 2t*] for the stencil")
    up, um, u_mid = sol.at(t + h), sol.at(t - h), sol.at(t)
    f = s.flux

    def integrand(x):
        return (up(x) - um(x)) / (2.0 * h) * eta(x) - f.f(u_mid(x)) * eta.prime(x)

    lo, hi = eta.support
    pts = [p for p in _front_points(sol, t) if lo < p < hi]
    val, _ = adaptive_gk(integrand, lo, hi, points=pts, atol=atol, rtol=0.0)
    return val


def residual_test_functions(s, sol, t):
    """Left, straddling and right bumps; every support contains the whole wave."""
    if t < s.t_star:
        pr = sol.at(t)
        center = 0.5 * (pr.phi1 + pr.phi2)
    else:
        center = s.x_star + s.c * (t - s.t_star)
    return [TestFunction(center - 0.5, 1.0, "left"),
            TestFunction(center, 1.0, "straddle"),
            TestFunction(center + 0.5, 1.0, "right")]


def constant_region_test_function(s, t, side="right"):
    """A bump supported in a constant-state region at distance >= 1.5 from the wave."""
    left = min(s.a2 + s.speed_left() * t, s.x_star + s.c * (t - s.t_star))
    right = max(s.a1 + s.speed_right() * t, s.x_star + s.c * (t - s.t_star))
    if side == "right":
        return TestFunction(right + 2.0, 0.5, "const-right")
    return TestFunction(left - 2.0, 0.5, "const-left")


# -- L1 distance --------------------------------------------------------------------

def l1_distance(sol, t, r=3.0, atol=1e-10):
    s = sol.s
    ref = ReferenceSolution(s)
    pr = sol.at(float(t))

    def integrand(x):
        return np.abs(pr(x) - ref(x, t))

    lo, hi = s.x_star - r, s.x_star + r
    pts = [p for p in _front_points(sol, t) if lo < p < hi]
    return adaptive_gk(integrand, lo, hi, points=pts, atol=atol, rtol=0.0)[0]


# -- entropy inequality -------------------------------------------------------------

class SpaceTimeBump:
    """Separable nonnegative test function theta(t) eta(x)."""

    def __init__(self, t_center, t_width, x_center, x_width, name=""):
        self.theta = TestFunction(t_center, t_width)
        self.eta = TestFunction(x_center, x_width)
        self.name = name

    def t_support(self, T):
        lo, hi = self.theta.support
        return max(lo, 0.0), min(hi, T)


def entropy_bumps(s):
    """One bump around the breaking point, one touching the initial line."""
    return [SpaceTimeBump(s.t_star, 0.5 * s.t_star, s.x_star, 1.0, "breaking"),
            SpaceTimeBump(0.0, 0.6 * s.t_star, 0.5 * (s.a1 + s.a2), 1.0, "initial")]


def _x_integral(sol, t, fn, lo, hi, atol):
    pts = [p for p in _front_points(sol, t) if lo < p < hi]
    return adaptive_gk(fn, lo, hi, points=pts, atol=atol, rtol=0.0)[0]


def entropy_inequality(sol, pair, psi, T=None, atol=1e-8):
    """int int [psi_t eta(u) + psi_x Q(u)] dx dt + int psi(x, 0) eta(u(x, 0)) dx.

    Nonnegative for the entropy solution; for u_eps it must be >= -C eps.
    The t integral is adaptive Gauss-Kronrod over nodes at which the x
    integral is itself computed adaptively (tensor of two 1D rules).
    """
    s = sol.s
    T = 2.0 * s.t_star if T is None else T
    t_lo, t_hi = psi.t_support(T)
    x_lo, x_hi = psi.eta.support
    th, et = psi.theta, psi.eta

    def inner(t):
        pr = sol.at(float(t))
        a = float(th.prime(t))
        b = float(th(t))

        def fn(x):
            u = pr(x)
            return a * et(x) * pair.eta(u) + b * et.prime(x) * pair.Q(u)
        return _x_integral(sol, t, fn, x_lo, x_hi, atol)

    def outer(ts):
        return np.array([inner(t) for t in ts])

    total = adaptive_gk(outer, t_lo, t_hi, atol=atol * 10, rtol=0.0, initial=4)[0]
    if t_lo == 0.0 and th(0.0) > 0:
        pr0 = sol.at(0.0)
        ref = ReferenceSolution(s)
        total += float(th(0.0)) * _x_integral(
            sol, 0.0, lambda x: et(x) * pair.eta(ref(x, 0.0)), x_lo, x_hi, atol)
    return total


def time_integrated_residual(sol, psi, T=None, atol=1e-8):
    """-int theta(t) <residual(t), eta> dt + initial mismatch; equals the linear-eta entropy total."""
    s = sol.s
    T = 2.0 * s.t_star if T is None else T
    t_lo, t_hi = psi.t_support(T)
    h = time_step(s, sol.eps)
    lo = max(t_lo, h)
    hi = min(t_hi, 2.0 * s.t_star - h)

    def outer(ts):
        return np.array([-float(psi.theta(t)) * weak_residual(sol, t, psi.eta, atol=atol)
                         for t in ts])

    total = adaptive_gk(outer, lo, hi, atol=atol * 10, rtol=0.0, initial=4)[0]
    if t_lo == 0.0 and psi.theta(0.0) > 0:
        pr0 = sol.at(0.0)
        ref = ReferenceSolution(s)
        x_lo, x_hi = psi.eta.support
        total += float(psi.theta(0.0)) * _x_integral(
            sol, 0.0, lambda x: psi.eta(x) * (ref(x, 0.0) - pr0(x)), x_lo, x_hi, atol)
    return total


# -- admissibility ------------------------------------------------------------------

def oleinik_check(s, t, delta=1e-9):
    """Traces (u_minus, u_plus) of the reference shock and whether u_minus > u_plus."""
    if t <= s.t_star:
        raise VerificationError(f"no shock before t* = {s.t_star:.6g} (got t={t})")
    ref = ReferenceSolution(s)
    xs = s.x_star + s.c * (t - s.t_star)
    um, up = float(ref(xs - delta, t)), float(ref(xs + delta, t))
    return um > up, (um, up)


# -- superposition lemma -------------------------------------------------------------

def superposition_check(a, b, c, phi1, phi2, eps, f, eta, B=None, atol=1e-12):
    """|<f(a + b w1 + c w2), eta> - <Heaviside expansion, eta>| with B at (phi1 - phi2)/eps."""
    B = B or default_table()
    pair = B.pair
    rho = (phi1 - phi2) / eps
    b1 = float(B.b1(rho))
    b2 = 1.0 - b1
    j1 = b2 * (f(a + b) - f(a)) + b1 * (f(a + b + c) - f(a + c))
    j2 = b1 * (f(a + c) - f(a)) + b2 * (f(a + b + c) - f(a + b))

    def lhs(x):
        return f(a + b * pair.omega(1, (phi1 - x) / eps) + c * pair.omega(2, (phi2 - x) / eps))

    def rhs(x):
        return f(a) + j1 * (x < phi1) + j2 * (x < phi2)

    lo, hi = eta.support
    pts = [p for p in (phi1, phi2) if lo < p < hi]
    val = adaptive_gk(lambda x: (lhs(x) - rhs(x)) * eta(x), lo, hi, points=pts,
                      atol=atol, rtol=0.0)[0]
    return abs(val)


def heaviside_check(i, phi, eps, eta, B=None, atol=1e-13):
    B = B or default_table()
    lo, hi = eta.support
    pts = [phi] if lo < phi < hi else []
    fn = lambda x: (B.pair.omega(i, (phi - x) / eps) - (x < phi)) * eta(x)
    return abs(adaptive_gk(fn, lo, hi, points=pts, atol=atol, rtol=0.0)[0])


def product_check(phi1, phi2, eps, eta, B=None, atol=1e-13):
    """|<w1 w2 - B1 H(phi1 - x) - B2 H(phi2 - x), eta>|."""
    B = B or default_table()
    rho = (phi1 - phi2) / eps
    b1 = float(B.b1(rho))
    pair = B.pair

    def fn(x):
        w = pair.omega(1, (phi1 - x) / eps) * pair.omega(2, (phi2 - x) / eps)
        return (w - b1 * (x < phi1) - (1.0 - b1) * (x < phi2)) * eta(x)

    lo, hi = eta.support
    pts = [p for p in (phi1, phi2) if lo < p < hi]
    return abs(adaptive_gk(fn, lo, hi, points=pts, atol=atol, rtol=0.0)[0])


# -- reporting -----------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    epsilons: list = field(default_factory=list)
    values: list = field(default_factory=list)
    slope: float | None = None
    detail: str = ""

    def to_dict(self):
        return _plain(asdict(self))


def _plain(obj):
    """numpy scalars to Python ones; non-finite floats to None."""
    if isinstance(obj, dict):
        return {k: _plain(x) for k, x in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(x) for x in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    return obj


def report_json(results, scenario=None):
    body = {"scenario": scenario, "passed": all(r.passed for r in results),
            "checks": [r.to_dict() for r in results]}
    return json.dumps(body, indent=2, sort_keys=True)
