"""Front trajectories phi_1, phi_2 of the two smoothed jumps.

The uncorrected fronts ride the extreme characteristics,

    phi_hat_i(t) = x_star + eps * (Phi(a_i, tau) / psi0' + g(a_i)),

so that (phi_hat_1 - phi_hat_2) / eps = rho(tau) exactly. A common shift
eps * Theta(tau) / psi0' is then added to both, with Theta' = h(tau) chosen so
that the sum of the two Rankine-Hugoniot type trajectory equations holds
with the states read at the blended feet X_hat_0(i, tau).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from .characteristics import CharacteristicTables, U1
from .mollifier import sigma

# relative size of the jump denominator below which h takes its limit -q
DEN_GUARD = 1e-6
LAMBDA = 5.0


def Omega(tau, lam=LAMBDA):
    """Switch from the mid foot (tau << 0) to the edge feet (tau >> 0)."""
    return sigma(-np.asarray(tau, dtype=float) / lam)


@dataclass
class _Edge:
    index: int
    a: float


class PhaseFunctions:
    """Eps-independent parts of the trajectories, tabulated on the tau grid."""

    def __init__(self, tables: CharacteristicTables, lam=LAMBDA):
        self.tables = tables
        s, B = tables.s, tables.B
        self.lam = float(lam)
        tau = tables.tau
        rho = tables.R.rho
        self.edges = {1: _Edge(-1, s.a1), 2: _Edge(0, s.a2)}
        self.F_edge = {i: tables.F[:, e.index].copy() for i, e in self.edges.items()}
        self.Phi_edge = {i: tables.Phi[:, e.index].copy() for i, e in self.edges.items()}
        self.g_edge = {i: float(tables.g_x0[e.index]) for i, e in self.edges.items()}

        om = Omega(tau, self.lam)
        self.X0 = {i: e.a + om * (s.x_check - e.a) for i, e in self.edges.items()}
        self.U1_edge = {i: U1(s, B, self.X0[i], rho) for i in (1, 2)}
        self.h = self._h_tilde(rho)
        self.Theta = cumulative_simpson(self.h, x=tau, initial=0.0)
        self.Theta -= self.Theta[tables.k0]

    def _h_tilde(self, rho):
        s, B, f = self.tables.s, self.tables.B, self.tables.s.flux
        u0, U = s.u0_0, s.U
        b1 = B.b1(rho)
        b2 = 1.0 - b1
        w1, w2 = self.U1_edge[1], self.U1_edge[2]
        r1, r2 = U + u0 - w1, U + u0 - w2
        rhs = (b2 * (f.f(w1) - f.f(u0)) + b1 * (f.f(U) - f.f(r1))
               + b2 * (f.f(U) - f.f(w2)) + b1 * (f.f(r2) - f.f(u0)))
        num = rhs - self.F_edge[2] * (U - w2) - self.F_edge[1] * (w1 - u0)
        den = (U - w2) + (w1 - u0)
        q = self.tables.corr.q
        small = den < DEN_GUARD * (U - u0)
        with np.errstate(divide="ignore", invalid="ignore"):
            h = np.where(small, -q, num / np.where(small, 1.0, den))
        self.den = den
        return h

    # interpolation in tau; Theta is Hermite with h as derivative
    def _hermite(self, val, der, tau):
        tb = self.tables
        if tau > tb.tau[-1]:
            return val[-1] + der[-1] * (tau - tb.tau[-1]), der[-1]
        j, r = tb._cell(tau)
        hh = tb.h
        r2, r3 = r * r, r * r * r
        v = ((2 * r3 - 3 * r2 + 1) * val[j] + (r3 - 2 * r2 + r) * hh * der[j]
             + (-2 * r3 + 3 * r2) * val[j + 1] + (r3 - r2) * hh * der[j + 1])
        return v, (1.0 - r) * der[j] + r * der[j + 1]

    def theta(self, tau):
        return self._hermite(self.Theta, self.h, tau)

    def edge_phi(self, i, tau):
        return self._hermite(self.Phi_edge[i], self.F_edge[i], tau)

    def X_hat_0(self, i, tau):
        s = self.tables.s
        a = self.edges[i].a
        return a + Omega(tau, self.lam) * (s.x_check - a)


class Trajectories:
    """The eps-dependent fronts phi_1(t), phi_2(t) and their speeds."""

    def __init__(self, phases: PhaseFunctions, eps):
        self.phases, self.eps = phases, float(eps)
        self.s = phases.tables.s

    def _tau(self, t):
        return float(self.s.tau(t, self.eps))

    def phi_hat_i(self, i, t):
        s, ph = self.s, self.phases
        Phi, _ = ph.edge_phi(i, self._tau(t))
        return s.x_star + self.eps * (Phi / s.psi0_prime + ph.g_edge[i])

    def hat_phi(self, t):
        """Theta(tau) / (psi0' tau): common shift per unit psi0; h(0)/psi0' at tau=0."""
        tau = self._tau(t)
        th, h = self.phases.theta(tau)
        if tau == 0.0:
            return h / self.s.psi0_prime
        return th / (self.s.psi0_prime * tau)

    def phi(self, i, t):
        th, _ = self.phases.theta(self._tau(t))
        return self.phi_hat_i(i, t) + self.eps * th / self.s.psi0_prime

    def phi_t(self, i, t):
        """Exact time derivative: d tau/dt = psi0'/eps cancels the prefactor."""
        tau = self._tau(t)
        _, F = self.phases.edge_phi(i, tau)
        _, h = self.phases.theta(tau)
        return F + h

    def separation(self, t):
        return self.phi(1, t) - self.phi(2, t)

    def residuals(self, t):
        """Residuals of the two trajectory equations and of their sum.

        States are read at the blended feet X_hat_0(i, tau); the sum vanishes
        by construction of h wherever the jump denominator is not degenerate.
        """
        ph = self.phases
        s, B, f = self.s, ph.tables.B, self.s.flux
        tau = self._tau(t)
        rho = ph.tables.rho_at(tau)
        b1 = float(B.b1(rho))
        b2 = 1.0 - b1
        u0, U = s.u0_0, s.U
        w1 = float(U1(s, B, ph.X_hat_0(1, tau), rho))
        w2 = float(U1(s, B, ph.X_hat_0(2, tau), rho))
        r1 = self.phi_t(1, t) * (w1 - u0) - (b2 * (f.f(w1) - f.f(u0))
                                             + b1 * (f.f(U) - f.f(U + u0 - w1)))
        r2 = self.phi_t(2, t) * (U - w2) - (b2 * (f.f(U) - f.f(w2))
                                            + b1 * (f.f(U + u0 - w2) - f.f(u0)))
        return float(r1), float(r2), float(r1 + r2)
