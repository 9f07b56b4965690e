import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shockform import scenario as sc
from shockform.scenario import FluxModel, ScenarioError, build_scenario


def test_burgers_constants(burgers):
    s = burgers
    assert (s.K, s.b, s.t_star, s.x_star, s.c) == pytest.approx((1, 1, 1, 1, 0.5), abs=1e-14)
    assert s.psi0_0 == 1 and s.psi0_prime == -1


def test_burgers_U2():
    s = build_scenario(FluxModel("burgers"), 0.0, 2.0, 1.0, 0.0)
    assert (s.K, s.b, s.t_star, s.c) == pytest.approx((2, 2, 0.5, 1), abs=1e-14)


def test_exponential_constants(expo):
    e = math.e
    assert expo.K == pytest.approx(e - 1, abs=1e-12)
    assert expo.b == pytest.approx(e, abs=1e-12)
    assert expo.t_star == pytest.approx(0.581977, abs=1e-6)
    # scalar root check of the profile equation at a2
    assert expo.flux.df(sc.u1(expo, expo.a2)) == pytest.approx(-expo.K * expo.a2 + expo.b, abs=1e-12)


@pytest.mark.parametrize("make", [sc.burgers_standard, sc.exponential_standard])
def test_characteristics_meet(make):
    s = make()
    assert s.a1 + s.speed_right() * s.t_star == pytest.approx(s.x_star, abs=1e-10)
    assert s.a2 + s.speed_left() * s.t_star == pytest.approx(s.x_star, abs=1e-10)
    assert s.t_star == pytest.approx(1 / s.K, rel=1e-14)
    assert s.psi0_prime < 0
    # Lax ordering: the right state is slower
    assert s.speed_right() < s.c < s.speed_left()
    assert s.a2 < s.x_check < s.a1


def test_validation_errors():
    with pytest.raises(ScenarioError) as err:
        build_scenario(FluxModel("burgers"), 1.0, 0.0, 1.0, 0.0)
    assert err.value.field == "U"
    with pytest.raises(ScenarioError) as err:
        build_scenario(FluxModel("burgers"), 0.0, 1.0, 0.0, 1.0)
    assert err.value.field == "a1"
    # u^3/3 is concave left of 0
    with pytest.raises(ScenarioError) as err:
        build_scenario(FluxModel("cubic"), -1.0, 1.0, 1.0, 0.0)
    assert err.value.field == "flux"
    with pytest.raises(ScenarioError):
        FluxModel("sine")


def test_u1_examples(burgers, expo):
    assert sc.u1(burgers, 0.5) == pytest.approx(0.5, abs=1e-14)
    for s in (burgers, expo):
        assert sc.u1(s, s.a1) == s.u0_0
        assert sc.u1(s, s.a2) == s.U
        # clamped outside
        assert sc.u1(s, s.a1 + 3) == s.u0_0
    x = np.linspace(expo.a2, expo.a1, 200)
    assert np.all(np.diff(sc.u1(expo, x)) < 0)


def test_xi(burgers, expo):
    assert sc.xi(burgers, 0.3) == pytest.approx(0.7, abs=1e-14)
    for s in (burgers, expo):
        m = sc.midstate_point(s)
        assert sc.xi(s, m) == pytest.approx(m, abs=1e-12)
        assert sc.xi_prime(s, m) == pytest.approx(-1, abs=1e-10)
        x = np.linspace(s.a2, s.a1, 64)
        assert np.max(np.abs(sc.u1(s, x) + sc.u1(s, sc.xi(s, x)) - s.U - s.u0_0)) < 1e-9
        assert np.max(np.abs(sc.xi(s, sc.xi(s, x)) - x)) < 1e-9
    assert np.allclose(sc.xi_prime(burgers, np.linspace(0.1, 0.9, 9)), -1, atol=1e-12)
    h = 1e-5
    fd = (sc.xi(expo, 0.25 + h) - sc.xi(expo, 0.25 - h)) / (2 * h)
    assert sc.xi_prime(expo, 0.25) == pytest.approx(fd, abs=1e-6)


def test_psi0_identity(expo):
    t = np.linspace(0, 2 * expo.t_star, 51)
    assert np.max(np.abs(expo.psi0(t) / expo.psi0_0 - (1 - expo.K * t))) < 1e-12


def test_parse_and_load(tmp_path):
    s = sc.parse_scenario({"flux": {"kind": "poly", "coeffs": [0, 0, 0.5]}, "u0": 0, "U": 1,
                           "a1": 1, "a2": 0})
    assert s.c == pytest.approx(0.5)
    p = tmp_path / "s.json"
    p.write_text(json.dumps(s.to_dict()))
    assert sc.load_scenario(p) == s
    with pytest.raises(ScenarioError) as err:
        sc.parse_scenario({"flux": "burgers", "u0": 0, "U": "x", "a1": 1, "a2": 0})
    assert err.value.field == "U"
    with pytest.raises(ScenarioError) as err:
        sc.parse_scenario({"flux": "burgers", "u0": 0, "U": 1, "a1": 1})
    assert err.value.field == "a2"
    p.write_text("{not json")
    with pytest.raises(ScenarioError):
        sc.load_scenario(p)


@settings(max_examples=40, deadline=None)
@given(u0=st.floats(-1, 1), du=st.floats(0.1, 2), a2=st.floats(-1, 1), da=st.floats(0.2, 2))
def test_random_exponential_scenarios(u0, du, a2, da):
    s = build_scenario(FluxModel("exp"), u0, u0 + du, a2 + da, a2)
    x = np.linspace(s.a2, s.a1, 64)
    assert np.max(np.abs(sc.u1(s, x) + sc.u1(s, sc.xi(s, x)) - s.U - s.u0_0)) < 1e-9
    assert np.all(sc.xi_prime(s, x[1:-1]) < 0)
    assert abs(s.a1 + s.speed_right() * s.t_star - s.x_star) < 1e-10
