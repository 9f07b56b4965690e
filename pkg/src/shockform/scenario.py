"""Convex flux models and the piecewise initial datum.

The datum is ``u0`` right of ``a1``, ``U`` left of ``a2`` and, in between,
the profile ``u1`` fixed by ``f'(u1(x)) = -K x + b``: every characteristic
leaving ``[a2, a1]`` reaches the same point ``x_star`` at ``t_star``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import Polynomial

from ._numerics import newton_bisect

FLUX_KINDS = ("burgers", "cubic", "exp", "poly")


class ScenarioError(ValueError):
    """Invalid scenario data; ``field`` names the offending input."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class FluxModel:
    """Flux ``f`` with its first two derivatives.

    ``kind`` is one of ``burgers`` (u^2/2), ``cubic`` (u^3/3), ``exp``
    (e^u) or ``poly`` (``coeffs`` in ascending powers).
    """

    kind: str = "burgers"
    coeffs: tuple = ()
    _poly: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in FLUX_KINDS:
            raise ScenarioError("flux.kind", f"unknown flux kind {self.kind!r}")
        if self.kind == "poly":
            if len(self.coeffs) < 3:
                raise ScenarioError("flux.coeffs", "a convex polynomial needs degree >= 2")
            p = Polynomial(np.asarray(self.coeffs, dtype=float))
            object.__setattr__(self, "_poly", (p, p.deriv(1), p.deriv(2)))

    def f(self, u):
        u = np.asarray(u, dtype=float)
        if self.kind == "burgers":
            return 0.5 * u * u
        if self.kind == "cubic":
            return u**3 / 3.0
        if self.kind == "exp":
            return np.exp(u)
        return self._poly[0](u)

    def df(self, u):
        u = np.asarray(u, dtype=float)
        if self.kind == "burgers":
            return u.copy() if u.ndim else u * 1.0
        if self.kind == "cubic":
            return u * u
        if self.kind == "exp":
            return np.exp(u)
        return self._poly[1](u)

    def d2f(self, u):
        u = np.asarray(u, dtype=float)
        if self.kind == "burgers":
            return np.ones_like(u)
        if self.kind == "cubic":
            return 2.0 * u
        if self.kind == "exp":
            return np.exp(u)
        return self._poly[2](u)

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "poly":
            d["coeffs"] = list(self.coeffs)
        return d


@dataclass(frozen=True)
class Scenario:
    flux: FluxModel
    u0_0: float
    U: float
    a1: float
    a2: float
    K: float
    b: float
    t_star: float
    x_star: float
    c: float

    @property
    def psi0_0(self):
        """Initial separation a1 - a2 of the two weak discontinuities."""
        return self.a1 - self.a2

    @property
    def psi0_prime(self):
        """Closing rate f'(u0) - f'(U) of the separation (negative)."""
        return float(self.flux.df(self.u0_0) - self.flux.df(self.U))

    @property
    def mid_state(self):
        return 0.5 * (self.U + self.u0_0)

    @property
    def x_check(self):
        """Foot at t = 0 of the shock line x = x* + c (t - t*)."""
        return self.x_star - self.c * self.t_star

    def psi0(self, t):
        return self.psi0_0 + self.psi0_prime * np.asarray(t, dtype=float)

    def tau(self, t, eps):
        return self.psi0(t) / eps

    def t_of_tau(self, tau, eps):
        return (eps * np.asarray(tau, dtype=float) - self.psi0_0) / self.psi0_prime

    def speed_left(self):
        return float(self.flux.df(self.U))

    def speed_right(self):
        return float(self.flux.df(self.u0_0))

    def to_dict(self):
        return {"flux": self.flux.to_dict(), "u0": self.u0_0, "U": self.U,
                "a1": self.a1, "a2": self.a2}


def build_scenario(flux, u0_0, U, a1, a2, n_check=257):
    u0_0, U, a1, a2 = float(u0_0), float(U), float(a1), float(a2)
    if not U > u0_0:
        raise ScenarioError("U", f"need U > u0, got U={U}, u0={u0_0}")
    if not a1 > a2:
        raise ScenarioError("a1", f"need a1 > a2, got a1={a1}, a2={a2}")
    grid = np.linspace(u0_0, U, n_check)
    if not np.all(flux.d2f(grid) > 0):
        raise ScenarioError("flux", f"f'' must be positive on [{u0_0}, {U}]")
    s0, sU = float(flux.df(u0_0)), float(flux.df(U))
    # f'(u0) = -K a1 + b and f'(U) = -K a2 + b
    K = (sU - s0) / (a1 - a2)
    b = s0 + K * a1
    t_star = (a1 - a2) / (sU - s0)
    x_star = a1 + s0 * t_star
    c = float(flux.f(U) - flux.f(u0_0)) / (U - u0_0)
    s = Scenario(flux, u0_0, U, a1, a2, K, b, t_star, x_star, c)
    if not a2 < s.x_check < a1:
        raise ScenarioError("flux", "shock foot x_star - c t_star falls outside (a2, a1)")
    return s


def _inverse_df(s, target):
    """Solve f'(u) = target for u in [u0, U]; targets outside are clamped."""
    f = s.flux
    lo_v, hi_v = s.speed_right(), s.speed_left()
    target = np.clip(np.asarray(target, dtype=float), lo_v, hi_v)
    slope = (s.U - s.u0_0) / (hi_v - lo_v)
    guess = s.u0_0 + slope * (target - lo_v)
    return newton_bisect(lambda u: (f.df(u) - target, f.d2f(u)),
                         s.u0_0, s.U, x0=guess, tol=1e-15)


def u1(s, x):
    """Profile between the weak discontinuities; x is clamped to [a2, a1]."""
    x = np.clip(np.asarray(x, dtype=float), s.a2, s.a1)
    out = _inverse_df(s, -s.K * x + s.b)
    # endpoint conditions hold exactly, not just to solver tolerance
    out = np.where(x == s.a1, s.u0_0, np.where(x == s.a2, s.U, out))
    return out if out.ndim else float(out)


def u1_prime(s, x):
    return -s.K / s.flux.d2f(u1(s, x))


def xi(s, x0):
    """Reflection x0 -> xi with u1(x0) + u1(xi) = U + u0."""
    # u1(xi) is known, so xi follows from f'(u1(xi)) = -K xi + b directly
    target = s.U + s.u0_0 - u1(s, x0)
    out = (s.b - s.flux.df(target)) / s.K
    return np.clip(out, s.a2, s.a1) if np.ndim(out) else float(np.clip(out, s.a2, s.a1))


def xi_prime(s, x0):
    return -u1_prime(s, x0) / u1_prime(s, xi(s, x0))


def midstate_point(s):
    """The fixed point of the reflection, where u1 equals (U + u0)/2."""
    return float((s.b - s.flux.df(s.mid_state)) / s.K)


def parse_scenario(data):
    """Build a Scenario from the JSON-shaped mapping of a scenario file."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario", "expected a JSON object")
    fl = data.get("flux", {"kind": "burgers"})
    if isinstance(fl, str):
        fl = {"kind": fl}
    if not isinstance(fl, dict) or "kind" not in fl:
        raise ScenarioError("flux", "expected an object with a 'kind' field")
    flux = FluxModel(fl["kind"], tuple(float(c) for c in fl.get("coeffs", ())))
    values = {}
    for key in ("u0", "U", "a1", "a2"):
        if key not in data:
            raise ScenarioError(key, "missing")
        try:
            values[key] = float(data[key])
        except (TypeError, ValueError):
            raise ScenarioError(key, f"not a number: {data[key]!r}") from None
        if not math.isfinite(values[key]):
            raise ScenarioError(key, "must be finite")
    return build_scenario(flux, values["u0"], values["U"], values["a1"], values["a2"])


def load_scenario(path):
    with open(Path(path)) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError("scenario", f"malformed JSON: {exc}") from None
    return parse_scenario(data)


def burgers_standard():
    return build_scenario(FluxModel("burgers"), 0.0, 1.0, 1.0, 0.0)


def exponential_standard():
    return build_scenario(FluxModel("exp"), 0.0, 1.0, 1.0, 0.0)
