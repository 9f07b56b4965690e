import numpy as np
import pytest
from scipy.integrate import trapezoid

from shockform.scenario import u1
from shockform.solution import (ReferenceSolution, ValidationError, WeakAsymptoticSolution,
                                eval_reference, eval_u_eps, sample_profile, tau_floor)
from shockform.verification import fit_rate, l1_distance


def test_tails(burgers_sols, expo_sols):
    for sols in (burgers_sols, expo_sols):
        for sol in sols.values():
            s = sol.s
            for t in np.linspace(0, 2 * s.t_star, 9):
                assert sol(s.x_star + 5, t) == pytest.approx(s.u0_0, abs=1e-8)
            assert sol(s.a2 - 5, 0.25 * s.t_star) == pytest.approx(s.U, abs=1e-6)


@pytest.mark.parametrize("which", ["burgers_sols", "expo_sols"])
def test_midpoint_converges(which, request):
    sols = request.getfixturevalue(which)
    pairs = []
    for e in (0.1, 0.05, 0.025):
        sol = sols[e]
        s, t = sol.s, 0.5 * sol.s.t_star
        xm = 0.5 * (sol.traj.phi(1, t) + sol.traj.phi(2, t))
        pairs.append((e, abs(eval_u_eps(sol, xm, t) - u1(s, (xm - s.b * t) / (1 - s.K * t)))))
    assert fit_rate(pairs).slope >= 0.8


def test_reference_examples(burgers):
    ref = ReferenceSolution(burgers)
    assert ref(0.75, 0.5) == pytest.approx(0.5, abs=1e-14)
    assert ref(1.2, 1.5) == 1.0
    assert ref(1.3, 1.5) == 0.0
    assert ref(1.0 - 1e-9, 1.0) == 1.0 and ref(1.0 + 1e-9, 1.0) == 0.0
    assert eval_reference(burgers, -1.0, 0.3) == burgers.U
    assert ref.kinks(0.5) == [0.5, 1.0]
    with pytest.raises(ValidationError):
        ref(0.0, -1.0)


def test_reference_rankine_hugoniot(expo):
    f = expo.flux
    assert expo.c * (expo.U - expo.u0_0) == pytest.approx(f.f(expo.U) - f.f(expo.u0_0), rel=1e-14)
    ref = ReferenceSolution(expo)
    xs = ref.kinks(1.5 * expo.t_star)[0]
    assert ref(xs - 1e-9, 1.5 * expo.t_star) > ref(xs + 1e-9, 1.5 * expo.t_star)


def test_sample_profile(burgers_sols):
    sol = burgers_sols[0.05]
    x, ue, ur = sample_profile(sol, 0.5, -1.0, 3.0, 2)
    assert list(x) == [-1.0, 3.0]
    x, ue, ur = sample_profile(sol, 1.5, -1.0, 3.0, 257)
    assert np.all(np.diff(x) > 0)
    k = [0, 100, 256]
    assert np.array_equal(ue[k], np.array([eval_u_eps(sol, xi, 1.5) for xi in x[k]]))
    assert np.array_equal(ur[k], np.array([eval_reference(sol.s, xi, 1.5) for xi in x[k]]))
    with pytest.raises(ValidationError):
        sample_profile(sol, 0.5, 1.0, 1.0, 10)
    with pytest.raises(ValidationError):
        sample_profile(sol, 0.5, 0.0, 1.0, 1)


def test_eps_validation(burgers):
    for bad in (0.0, -0.1, 0.6):
        with pytest.raises(ValidationError):
            WeakAsymptoticSolution(burgers, bad)


def test_tau_floor(burgers):
    assert tau_floor(burgers, 0.05) == -200.0
    lo = tau_floor(burgers, 0.003125)
    assert lo < burgers.tau(2 * burgers.t_star, 0.003125)


@pytest.mark.parametrize("which", ["burgers_sols", "expo_sols"])
def test_range_and_smoothness(which, request):
    for sol in request.getfixturevalue(which).values():
        s = sol.s
        d = 0.02 * (s.U - s.u0_0)
        x = np.linspace(s.a2 - 3, s.x_star + 3, 3001)
        for t in np.linspace(0, 2 * s.t_star, 9):
            u = sol(x, t)
            assert u.min() >= s.u0_0 - d and u.max() <= s.U + d
            second = np.diff(u, 2) / (x[1] - x[0]) ** 2
            assert np.all(np.isfinite(second))
            assert np.max(np.abs(second)) < 10 / sol.eps**2


@pytest.mark.parametrize("which", ["burgers_sols", "expo_sols"])
def test_monotone_front(which, request):
    for sol in request.getfixturevalue(which).values():
        s = sol.s
        for t in np.linspace(1.21 * s.t_star, 2 * s.t_star, 5):
            x = np.linspace(s.x_star - 1, s.x_star + s.c * (t - s.t_star) + 1, 2001)
            assert np.max(np.diff(sol(x, t))) <= 1e-6


@pytest.mark.parametrize("which", ["burgers_sols", "expo_sols"])
def test_conservation_drift(which, request):
    sols = request.getfixturevalue(which)
    s = next(iter(sols.values())).s
    x = np.linspace(s.a2 - 2, s.x_star + 2 * s.c * s.t_star + 2, 20001)
    for t in (0.5 * s.t_star, 1.5 * s.t_star):
        pairs = []
        for e, sol in sols.items():
            drift = trapezoid(sol(x, t) - sol(x, 0.0), x) + t * (s.flux.f(s.u0_0) - s.flux.f(s.U))
            pairs.append((e, abs(drift)))
        assert all(v <= 1.0 * e for e, v in pairs)
        assert fit_rate(pairs).slope >= 0.8


def test_initial_l1(burgers_sols):
    pairs = [(e, l1_distance(sol, 0.0)) for e, sol in burgers_sols.items()]
    assert fit_rate(pairs).passes(0.8)
