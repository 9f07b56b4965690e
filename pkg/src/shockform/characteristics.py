"""Corrected characteristics of the interacting profile.

Along the new characteristics the transported state is
``U1(x0, rho) = B2 u1(x0) + B1 u1(xi(x0))`` and the speed is

    F(x0, tau) = B2 f'(U1(x0, rho)) + B1 f'(U1(xi(x0), rho)) + q(tau).

With ``Phi(x0, tau) = int_0^tau F`` the characteristic issued from x0 is

    x(x0, t) = x_star + eps * (Phi(x0, tau) / psi0' + g(x0) + A x0),

where ``g(x0)`` is the constant that puts the start back at ``x0`` at t = 0
and ``A`` is the regularization that keeps the map strictly increasing.
Everything except the final assembly is independent of eps, so the tables
below are built once per scenario on an (tau, x0) product grid.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.integrate import cumulative_simpson, simpson, trapezoid
from scipy.interpolate import CubicHermiteSpline

from . import dynamics
from ._numerics import newton_bisect
from .scenario import u1 as _u1, u1_prime as _u1_prime, xi as _xi, xi_prime as _xi_prime

log = logging.getLogger(__name__)

A_MAX = 1024.0


class TauRangeError(ValueError):
    pass


class CharacteristicsError(RuntimeError):
    pass


def U1(s, B, x0, rho):
    b1 = B.b1(rho)
    return (1.0 - b1) * _u1(s, x0) + b1 * _u1(s, _xi(s, x0))


def dU1_dx0(s, B, x0, rho):
    b1 = B.b1(rho)
    return (1.0 - b1) * _u1_prime(s, x0) + b1 * _u1_prime(s, _xi(s, x0)) * _xi_prime(s, x0)


def _hermite_weights(r, h):
    r2, r3 = r * r, r * r * r
    return (2 * r3 - 3 * r2 + 1, (r3 - 2 * r2 + r) * h, -2 * r3 + 3 * r2, (r3 - r2) * h)


class CharacteristicTables:
    """Eps-independent running integrals on the (tau, x0) grid.

    Attributes of note: ``Phi``/``F`` (position integral and its tau
    derivative), ``Psi``/``D`` (their x0 derivatives, free of q),
    ``g_x0``/``g_x0_prime`` and the correction functions ``corr``.
    """

    def __init__(self, s, B, R=None, n_x0=129, **rho_kw):
        self.s, self.B = s, B
        self.R = R if R is not None else dynamics.solve_rho(s, B, **rho_kw)
        tau = self.R.tau
        self.tau = tau
        self.k0 = int(np.flatnonzero(tau == 0.0)[0])
        self.x0 = np.linspace(s.a2, s.a1, n_x0)
        self.u1n = _u1(s, self.x0)
        self.u1p = _u1_prime(s, self.x0)
        self.speed0 = s.flux.df(self.u1n)
        psi_p = s.psi0_prime
        total = s.U + s.u0_0

        b1 = self.B.b1(self.R.rho)[:, None]
        b2 = 1.0 - b1
        bd = self.B.b2_diff(self.R.rho)[:, None]
        U1g = b2 * self.u1n + b1 * (total - self.u1n)
        Uxi = total - U1g
        f = s.flux

        # x0-derivative of the speed; q does not depend on x0
        self.D = (b2 * f.d2f(U1g) - b1 * f.d2f(Uxi)) * bd * self.u1p
        self.Psi = self._running(self.D)
        tail = -(self.Psi[-1] + s.K * tau[-1]) / psi_p
        self.g_x0_prime = tail
        # normalized Jacobian; integrates to rho over [a2, a1]
        W = self.Psi / psi_p + tail
        weighted = simpson(self.u1n * W, x=self.x0, axis=1)
        self.jacobian_mass = simpson(W, x=self.x0, axis=1)
        g = dynamics.g_correction(s, B, self.R, weighted)
        q = dynamics.q_correction(s, B, self.R, g)
        self.corr = dynamics.CorrectionFunctions(tau, g, q)
        del W

        self.F = b2 * f.df(U1g) + b1 * f.df(Uxi) + q[:, None]
        del U1g, Uxi
        self.Phi = self._running(self.F)
        self._check_tail()
        self.g_x0 = -(self.Phi[-1] - self.speed0 * tau[-1]) / psi_p
        self.h = tau[1] - tau[0]

    def _running(self, arr):
        c = cumulative_simpson(arr, x=self.tau, axis=0, initial=0.0)
        return c - c[self.k0]

    def _check_tail(self, span=10.0):
        j = int(np.searchsorted(self.tau, self.tau[-1] - span))
        J = self.F[j:] - self.speed0
        est = np.abs(trapezoid(J, self.tau[j:], axis=0)).max()
        if est > 1e-8:
            raise CharacteristicsError(
                f"running integral not converged at tau_max (tail {est:.2e}); "
                "increase dynamics.tau_max")

    # -- interpolation in tau ---------------------------------------------

    def _cell(self, tau):
        tau = float(tau)
        if tau < self.tau[0] - 1e-12:
            raise TauRangeError(f"tau={tau:.6g} below the grid; decrease dynamics.tau_min")
        j = min(int((tau - self.tau[0]) / self.h), self.tau.size - 2)
        return j, (tau - self.tau[j]) / self.h

    def _interp(self, val, der, tau):
        if tau > self.tau[-1]:
            return val[-1] + der[-1] * (tau - self.tau[-1]), der[-1]
        j, r = self._cell(tau)
        h00, h10, h01, h11 = _hermite_weights(r, self.h)
        v = h00 * val[j] + h10 * der[j] + h01 * val[j + 1] + h11 * der[j + 1]
        w = 1.0 - r
        return v, w * der[j] + r * der[j + 1]

    def phi_nodes(self, tau):
        """Phi(x0_k, tau) and F(x0_k, tau) at the x0 nodes."""
        return self._interp(self.Phi, self.F, tau)

    def psi_nodes(self, tau):
        return self._interp(self.Psi, self.D, tau)

    def rho_at(self, tau):
        return self.R(tau)

    def W_nodes(self, tau):
        """Normalized Jacobian dx/dx0 / eps at the nodes, without the A term."""
        return self.psi_nodes(tau)[0] / self.s.psi0_prime + self.g_x0_prime

    # -- point evaluators ---------------------------------------------------

    def X1(self, x0, tau):
        """(psi0' tau)^-1 int_0^tau [F - f'(u1(x0))] d tau'."""
        s = self.s
        x0 = np.asarray(x0, dtype=float)
        phi, F = self.phi_nodes(tau)
        psi, D = self.psi_nodes(tau)
        if tau == 0.0:
            return (CubicHermiteSpline(self.x0, F, D)(x0) - s.flux.df(_u1(s, x0))) / s.psi0_prime
        spline = CubicHermiteSpline(self.x0, phi, psi)
        return (spline(x0) - s.flux.df(_u1(s, x0)) * tau) / (s.psi0_prime * tau)

    def g_of_x0(self, x0):
        spline = CubicHermiteSpline(self.x0, self.g_x0, self.g_x0_prime)
        return spline(np.asarray(x0, dtype=float))

    def g_prime_of_x0(self, x0):
        spline = CubicHermiteSpline(self.x0, self.g_x0, self.g_x0_prime)
        return spline.derivative()(np.asarray(x0, dtype=float))


class MapSlice:
    """The characteristic map x0 -> x at one fixed time."""

    def __init__(self, tables, t, eps, A):
        s = tables.s
        self.t, self.eps, self.A = t, eps, A
        self.tau = float(s.tau(t, eps))
        self.rho = tables.rho_at(self.tau)
        phi, _ = tables.phi_nodes(self.tau)
        psi, _ = tables.psi_nodes(self.tau)
        x0 = tables.x0
        self.x0_nodes = x0
        self.x_nodes = s.x_star + eps * (phi / s.psi0_prime + tables.g_x0 + A * x0)
        self.dx_nodes = eps * (psi / s.psi0_prime + tables.g_x0_prime + A)
        self.spline = CubicHermiteSpline(x0, self.x_nodes, self.dx_nodes)
        self._tables = tables

    def __call__(self, x0):
        return self.spline(np.asarray(x0, dtype=float))

    def derivative(self, x0):
        return self.spline(np.asarray(x0, dtype=float), 1)

    def invert(self, x, tol=1e-14):
        x = np.asarray(x, dtype=float)
        xs = np.clip(x, self.x_nodes[0], self.x_nodes[-1])
        j = np.clip(np.searchsorted(self.x_nodes, xs) - 1, 0, self.x0_nodes.size - 2)
        lo, hi = self.x0_nodes[j], self.x0_nodes[j + 1]
        guess = np.interp(xs, self.x_nodes, self.x0_nodes)
        sp = self.spline
        out = newton_bisect(lambda y: (sp(y) - xs, sp(y, 1)), lo, hi, x0=guess, tol=tol)
        out = np.where(x <= self.x_nodes[0], self.x0_nodes[0],
                       np.where(x >= self.x_nodes[-1], self.x0_nodes[-1], out))
        return out if out.ndim else float(out)


class CharacteristicField:
    """Eps-dependent assembly of the characteristic map with constant A."""

    def __init__(self, tables, eps, A=None, t_points=256):
        self.tables, self.s, self.eps = tables, tables.s, float(eps)
        self.t_grid = np.linspace(0.0, 2.0 * self.s.t_star, t_points)
        self.A = choose_A(tables, self.eps, self.t_grid) if A is None else float(A)

    def slice(self, t):
        return MapSlice(self.tables, t, self.eps, self.A)

    def x_map(self, x0, t):
        return self.slice(t)(x0)

    def x_hat(self, x0, t):
        """Characteristic position without the g and A corrections."""
        s, tb = self.s, self.tables
        tau = float(s.tau(t, self.eps))
        phi, _ = tb.phi_nodes(tau)
        psi, _ = tb.psi_nodes(tau)
        sp = CubicHermiteSpline(tb.x0, phi, psi)
        return s.x_star + self.eps * sp(np.asarray(x0, dtype=float)) / s.psi0_prime

    def x_hat_classical_form(self, x0, t):
        """X(x0, t) + psi0 X1(x0, tau): the same quantity, other route."""
        s = self.s
        x0 = np.asarray(x0, dtype=float)
        tau = float(s.tau(t, self.eps))
        return x0 * (1.0 - s.K * t) + s.b * t + s.psi0(t) * self.tables.X1(x0, tau)

    def dx_dx0(self, x0, t):
        return self.slice(t).derivative(x0)

    def invert_x0(self, x, t):
        return self.slice(t).invert(x)

    def min_jacobian(self, A=None):
        return _min_W(self.tables, self.eps, self.t_grid) + (self.A if A is None else A)


def _min_W(tables, eps, t_grid):
    s = tables.s
    return min(float(tables.W_nodes(float(s.tau(t, eps))).min()) for t in t_grid)


def choose_A(tables, eps, t_grid):
    """Smallest A in 1, 2, 4, ... with dx/dx0 >= 0.1 eps on the (x0, t) grid."""
    floor = _min_W(tables, eps, t_grid)
    A = 1.0
    while floor + A < 0.1:
        A *= 2.0
        if A > A_MAX:
            raise CharacteristicsError(
                f"no A <= {A_MAX:g} keeps the map increasing (min W = {floor:.3g})")
    log.info("choose_A: eps=%g min W=%.6g -> A=%g", eps, floor, A)
    return A
