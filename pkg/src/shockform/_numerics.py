"""Small vectorized numerical kernels shared by the modules.

scipy's bracketed solvers and adaptive quadrature work on scalars; here
everything is evaluated on whole arrays at once, which is what makes the
pointwise evaluation of the asymptotic solution affordable.
"""

import numpy as np


class ConvergenceError(RuntimeError):
    pass


def newton_bisect(func, lo, hi, x0=None, tol=1e-13, maxiter=100):
    """Safeguarded Newton iteration for increasing ``func`` on ``[lo, hi]``.

    ``func(x)`` must return ``(value, derivative)``. ``lo``, ``hi`` and the
    targets are broadcast together; the root is assumed to be bracketed
    (callers clamp first). A Newton step leaving the current bracket is
    replaced by bisection.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, float), np.asarray(hi, float))
    lo = lo.copy()
    hi = hi.copy()
    x = 0.5 * (lo + hi) if x0 is None else np.clip(np.asarray(x0, float), lo, hi)
    x = np.array(x, dtype=float, copy=True)
    scale = np.maximum(np.abs(hi - lo), 1e-300)
    for _ in range(maxiter):
        val, der = func(x)
        lo = np.where(val < 0, x, lo)
        hi = np.where(val > 0, x, hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(der > 0, val / der, np.inf)
        xn = x - step
        bad = ~np.isfinite(xn) | (xn <= lo) | (xn >= hi)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        done = (np.abs(xn - x) <= tol * scale) | (val == 0)
        x = np.where(val == 0, x, xn)
        if np.all(done):
            return x
    if np.all(np.abs(hi - lo) <= 1e3 * tol * scale):
        return x
    raise ConvergenceError("newton_bisect did not converge")


# Gauss-Kronrod 7/15 nodes and weights on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WGAUSS = np.zeros(15)
_WGAUSS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def adaptive_gk(func, a, b, points=(), atol=1e-10, rtol=1e-12, max_intervals=20000,
                initial=8):
    """Globally adaptive Gauss-Kronrod (G7/K15) quadrature of a vectorized ``func``.

    ``points`` are interior breakpoints (kinks, fronts) that always become
    interval endpoints. Each refinement pass evaluates every interval that
    still fails its share of the tolerance in one vectorized call.
    Returns ``(integral, error_estimate)``.
    """
    if b <= a:
        raise ValueError("adaptive_gk requires a < b")
    brk = np.unique(np.concatenate([[a, b], [p for p in points if a < p < b]]))
    edges = np.concatenate([np.linspace(lo, hi, initial + 1)[:-1]
                            for lo, hi in zip(brk[:-1], brk[1:])] + [[b]])
    lo, hi = edges[:-1], edges[1:]
    total = 0.0
    err_done = 0.0
    length = b - a
    while True:
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = mid[:, None] + half[:, None] * _NODES[None, :]
        fx = np.asarray(func(x.ravel()), float).reshape(x.shape)
        kron = half * (fx @ _WK)
        gauss = half * (fx @ _WGAUSS)
        err = np.abs(kron - gauss)
        tol = np.maximum(atol, rtol * abs(total + kron.sum()))
        ok = err <= tol * (hi - lo) / length
        total += kron[ok].sum()
        err_done += err[ok].sum()
        if ok.all():
            return total, err_done
        lo, hi = lo[~ok], hi[~ok]
        if 2 * lo.size > max_intervals:
            raise ConvergenceError(
                f"adaptive_gk: interval budget exhausted near x={lo[0]:.6g}")
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])


def gauss_legendre(n):
    """Nodes and weights of the n-point Gauss-Legendre rule on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w
