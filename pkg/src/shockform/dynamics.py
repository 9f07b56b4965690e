"""Interaction dynamics in the fast variable tau = psi0(t) / eps.

The normalized front separation rho(tau) obeys the autonomous equation
d rho / d tau = G(rho) with G >= 0, a double zero at rho0 and G -> 1 for
large rho. Integrating it backward from rho(tau_max) = tau_max gives the
whole interaction history, independent of eps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

Q_GUARD = 1e-8


class StepSizeError(RuntimeError):
    def __init__(self, tau, message):
        super().__init__(f"{message} (tau={tau:.6g})")
        self.tau = tau


def ode_rhs_G(rho, s, B):
    b1 = B.b1(rho)
    b2 = 1.0 - b1
    lo = b2 * s.u0_0 + b1 * s.U
    hi = b2 * s.U + b1 * s.u0_0
    return B.b2_diff(rho) * (s.flux.df(lo) - s.flux.df(hi)) / s.psi0_prime


def G_second_derivative_formula(s, B):
    """Closed form of G''(rho0) including the 1/psi0' normalization of G."""
    m = s.mid_state
    return (-8.0 * B.b2_prime(B.rho0) ** 2 * (s.U - s.u0_0) * float(s.flux.d2f(m))
            / s.psi0_prime)


@dataclass
class RhoSolution:
    tau: np.ndarray
    rho: np.ndarray
    rho_dot: np.ndarray
    rho0: float

    def __post_init__(self):
        self._spline = CubicSpline(self.tau, self.rho)

    @property
    def step(self):
        return self.tau[1] - self.tau[0]

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        out = np.where(tau > self.tau[-1], tau, self._spline(np.clip(tau, self.tau[0], self.tau[-1])))
        return out if out.ndim else float(out)

    def index(self, tau):
        """Grid index of the node nearest to tau."""
        return int(round((tau - self.tau[0]) / self.step))


def tau_grid(tau_min=-200.0, tau_max=200.0, step=0.01):
    if not tau_min < 0 < tau_max:
        raise ValueError("tau grid must straddle 0")
    n = int(round((tau_max - tau_min) / step)) + 1
    grid = np.linspace(tau_min, tau_max, n)
    grid[np.argmin(np.abs(grid))] = 0.0
    return grid


def solve_rho(s, B, tau_min=-200.0, tau_max=200.0, step=0.01, tol=1e-10, max_step=0.5):
    # G is exactly 1 beyond the B table, which lets an uncapped step jump the
    # whole interaction region
    tau = tau_grid(tau_min, tau_max, step)
    if not B.rho_min < B.rho0 < B.rho_max:
        raise ValueError("rho0 must lie inside the B table")

    def rhs(_t, y):
        return [float(ode_rhs_G(y[0], s, B))]

    sol = solve_ivp(rhs, (tau_max, tau_min), [tau_max], method="DOP853",
                    t_eval=tau[::-1], rtol=tol, atol=tol * 1e-2,
                    max_step=max_step)
    if sol.status != 0:
        where = sol.t[-1] if sol.t.size else tau_max
        raise StepSizeError(where, f"rho integration failed: {sol.message}")
    rho = sol.y[0][::-1]
    rho_dot = ode_rhs_G(rho, s, B)
    return RhoSolution(tau, rho, rho_dot, B.rho0)


def g_correction(s, B, R, weighted_u1):
    """g(tau) on the tau grid.

    ``weighted_u1[k]`` is the integral over [a2, a1] of u1(x0) times the
    normalized Jacobian of the characteristic map at ``R.tau[k]`` (the
    Jacobian integrates to rho over the interval).
    """
    b2p = B.b2_prime(R.rho)
    pre = s.psi0_prime * R.rho_dot * b2p
    return pre * (0.5 * R.rho * (s.U + s.u0_0) - weighted_u1)


def q_correction(s, B, R, g):
    """q = g / ((B2 - B1)(U - u0)), extrapolated where B2 - B1 degenerates."""
    den = B.b2_diff(R.rho) * (s.U - s.u0_0)
    safe = np.abs(den) >= Q_GUARD
    q = np.zeros_like(g)
    q[safe] = g[safe] / den[safe]
    bad = np.flatnonzero(~safe)
    if bad.size:
        good = np.flatnonzero(safe)
        for k in bad:
            # three nearest safe nodes, quadratic through them
            near = good[np.argsort(np.abs(good - k))[:3]]
            coef = np.polyfit(R.tau[near], q[near], 2)
            q[k] = np.polyval(coef, R.tau[k])
    return q


@dataclass
class CorrectionFunctions:
    tau: np.ndarray
    g: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        self._g = CubicSpline(self.tau, self.g)
        self._q = CubicSpline(self.tau, self.q)

    def g_at(self, tau):
        return self._eval(self._g, tau)

    def q_at(self, tau):
        return self._eval(self._q, tau)

    def _eval(self, spline, tau):
        tau = np.asarray(tau, dtype=float)
        out = np.where(tau > self.tau[-1], 0.0, spline(np.clip(tau, self.tau[0], self.tau[-1])))
        return out if out.ndim else float(out)
