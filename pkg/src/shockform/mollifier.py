"""Smoothed Heaviside pair and the switch functions of their product.

``omega_1(z) = sigma(z)`` and ``omega_2(z) = sigma(z + shift)`` with
``sigma(z) = (1 + tanh z) / 2``. For two fronts at separation ``rho``
(in units of the smoothing scale) the product of the smoothed Heavisides
splits weakly into ``B1(rho) H1 + B2(rho) H2`` with

    B1(rho) = int sigma'(z) sigma(z - rho + shift) dz,    B2 = 1 - B1,

so ``B1 = B2 = 1/2`` exactly when the fronts coincide, at ``rho0 = shift``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad_vec
from scipy.interpolate import CubicSpline

Z_CUT = 30.0


def sigma(z):
    return 0.5 * (1.0 + np.tanh(z))


def sigma_prime(z):
    return 0.5 / np.cosh(np.clip(z, -350.0, 350.0)) ** 2


@dataclass(frozen=True)
class MollifierPair:
    shift: float = 2.0

    def __post_init__(self):
        if not self.shift > 0:
            raise ValueError("mollifier shift must be positive")

    def omega(self, i, z):
        return sigma(z) if i == 1 else sigma(np.asarray(z) + self.shift)

    def omega_dot(self, i, z):
        return sigma_prime(z) if i == 1 else sigma_prime(np.asarray(z) + self.shift)


class BTable:
    """Tabulated B1, B2 and B2' on a uniform rho grid with cubic interpolation.

    Beyond the grid B1 is 0 (right) or 1 (left) and B2' is 0; the tanh
    tails make the neglected parts smaller than 1e-12 for the default range.
    """

    def __init__(self, pair=None, rho_min=-40.0, rho_max=60.0, step=0.05):
        self.pair = pair or MollifierPair()
        n = int(round((rho_max - rho_min) / step)) + 1
        self.rho = np.linspace(rho_min, rho_max, n)
        self.rho_min, self.rho_max = float(rho_min), float(rho_max)
        s = self.pair.shift
        rho = self.rho

        def integrand(z):
            w1 = sigma_prime(z)
            return np.concatenate([w1 * sigma(z - rho + s), w1 * sigma_prime(z - rho + s)])

        vals, _ = quad_vec(integrand, -Z_CUT, Z_CUT, epsabs=1e-14, epsrel=1e-13,
                           limit=2000)
        self.b1_samples = vals[:n]
        self.b2p_samples = vals[n:]
        self._b1 = CubicSpline(rho, self.b1_samples)
        self._b2p = CubicSpline(rho, self.b2p_samples)
        self.rho0 = self._find_rho0()

    def b1(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = self._b1(np.clip(rho, self.rho_min, self.rho_max))
        out = np.where(rho > self.rho_max, 0.0, np.where(rho < self.rho_min, 1.0, out))
        return out if out.ndim else float(out)

    def b2(self, rho):
        return 1.0 - self.b1(rho)

    def b2_prime(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = self._b2p(np.clip(rho, self.rho_min, self.rho_max))
        out = np.where((rho > self.rho_max) | (rho < self.rho_min), 0.0, out)
        return out if out.ndim else float(out)

    def b2_diff(self, rho):
        """B2 - B1, computed without the cancellation of 1 - 2 B1 near 0."""
        return 1.0 - 2.0 * self.b1(rho)

    def _find_rho0(self):
        lo, hi = self.rho_min, self.rho_max
        if not (self.b1(lo) > 0.5 > self.b1(hi)):
            raise ValueError("B2 - 1/2 has no root inside the table; bad shift")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.b1(mid) > 0.5:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-15:
                break
        return 0.5 * (lo + hi)


@lru_cache(maxsize=8)
def default_table(shift=2.0, rho_min=-40.0, rho_max=60.0, step=0.05):
    return BTable(MollifierPair(shift), rho_min, rho_max, step)
