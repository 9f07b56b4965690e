"""The weak asymptotic solution u_eps and the exact entropy solution.

    u_eps = u0 + (U1(x0, rho) - u0) w1((phi1 - x)/eps) + (U - U1(x0, rho)) w2((phi2 - x)/eps)

with ``x0 = x0(x, t)`` the inverse characteristic map, ``tau = psi0(t)/eps``
and ``rho = rho(tau)``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import mollifier
from .characteristics import CharacteristicField, CharacteristicTables, U1
from .phases import LAMBDA, PhaseFunctions, Trajectories
from .scenario import u1 as _u1


class ValidationError(ValueError):
    pass


_TABLE_CACHE: dict = {}


def tau_floor(s, eps, default=-200.0):
    """Lower end of the tau grid needed to reach t = 2 t* at this eps."""
    need = s.tau(2.0 * s.t_star, eps)
    return default if need >= default else float(math.floor(1.05 * need))


def tables_for(s, B=None, tau_min=-200.0):
    """Shared eps-independent tables for a scenario (built once per process)."""
    B = B or mollifier.default_table()
    key = (s, id(B), tau_min)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = (B, CharacteristicTables(s, B, tau_min=tau_min))
    return _TABLE_CACHE[key][1]


class Profile:
    """u_eps(., t) at a fixed time; cheap to call many times."""

    def __init__(self, sol, t):
        self.sol, self.t = sol, float(t)
        s = sol.s
        self.slice = sol.field.slice(self.t)
        self.rho = self.slice.rho
        self.phi1 = sol.traj.phi(1, self.t)
        self.phi2 = sol.traj.phi(2, self.t)
        self._b1 = float(sol.B.b1(self.rho))
        self._s = s

    def U1(self, x):
        s = self._s
        x0 = self.slice.invert(x)
        w = _u1(s, x0)
        return (1.0 - self._b1) * w + self._b1 * (s.U + s.u0_0 - w)

    def __call__(self, x):
        s, eps = self._s, self.sol.eps
        pair = self.sol.B.pair
        x = np.asarray(x, dtype=float)
        w = self.U1(x)
        out = (s.u0_0 + (w - s.u0_0) * pair.omega(1, (self.phi1 - x) / eps)
               + (s.U - w) * pair.omega(2, (self.phi2 - x) / eps))
        return out if out.ndim else float(out)


class WeakAsymptoticSolution:
    def __init__(self, s, eps, B=None, tables=None, lam=LAMBDA, A=None):
        if not 0 < eps <= 0.5:
            raise ValidationError(f"eps must lie in (0, 0.5], got {eps}")
        self.s, self.eps = s, float(eps)
        if tables is None:
            tables = tables_for(s, B, tau_floor(s, self.eps))
        self.tables = tables
        self.B = self.tables.B
        self.phases = _phases_for(self.tables, float(lam))
        self.field = CharacteristicField(self.tables, self.eps, A=A)
        self.traj = Trajectories(self.phases, self.eps)

    @property
    def A(self):
        return self.field.A

    @lru_cache(maxsize=64)
    def at(self, t):
        return Profile(self, t)

    def __call__(self, x, t):
        return self.at(float(t))(x)

    def U1_along(self, x0, t):
        tau = float(self.s.tau(t, self.eps))
        return U1(self.s, self.B, x0, self.tables.rho_at(tau))


_PHASE_CACHE: dict = {}


def _phases_for(tables, lam):
    key = (id(tables), lam)
    if key not in _PHASE_CACHE:
        _PHASE_CACHE[key] = (tables, PhaseFunctions(tables, lam))
    return _PHASE_CACHE[key][1]


def eval_u_eps(sol, x, t):
    return sol(x, t)


class ReferenceSolution:
    """Entropy solution: compression wave before t*, one shock of speed c after."""

    def __init__(self, s):
        self.s = s

    def __call__(self, x, t):
        s = self.s
        x = np.asarray(x, dtype=float)
        t = float(t)
        if t < 0:
            raise ValidationError("t must be >= 0")
        if t >= s.t_star:
            out = np.where(x < s.x_star + s.c * (t - s.t_star), s.U, s.u0_0)
        else:
            left = s.a2 + s.speed_left() * t
            right = s.a1 + s.speed_right() * t
            inner = _u1(s, (x - s.b * t) / (1.0 - s.K * t))
            out = np.where(x <= left, s.U, np.where(x >= right, s.u0_0, inner))
        return out if out.ndim else float(out)

    def kinks(self, t):
        s = self.s
        if t >= s.t_star:
            return [s.x_star + s.c * (t - s.t_star)]
        return [s.a2 + s.speed_left() * t, s.a1 + s.speed_right() * t]


def eval_reference(s, x, t):
    return ReferenceSolution(s)(x, t)


def sample_profile(sol, t, x_lo, x_hi, n):
    """Uniform table of (x, u_eps, u_ref)."""
    if n < 2:
        raise ValidationError("need n >= 2")
    if not x_lo < x_hi:
        raise ValidationError(f"need x_lo < x_hi, got {x_lo}, {x_hi}")
    x = np.linspace(x_lo, x_hi, int(n))
    return x, np.asarray(sol(x, t)), np.asarray(ReferenceSolution(sol.s)(x, t))
