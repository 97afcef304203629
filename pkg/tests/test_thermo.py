import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ionshock import DomainError
from ionshock.thermo import (
    CONCAVE_TEMPERATURE_RATIO,
    HYDROGEN,
    Curvature,
    GasModel,
    ThermoState,
    concavity_threshold,
    energy_enthalpy,
    entropy_eta,
    get_gas,
    gnl_sufficient,
    integral_curve_curvature,
    p_eta,
    pressure,
    properties,
    saha_alpha,
    saha_log_alpha,
    sound_speed,
    sound_speed_factor_sq,
)

H = HYDROGEN
MP = oracles.MPGas(H)

alphas = st.floats(1e-6, 1 - 1e-6)
ratios = st.floats(0.05, 500.0)  # T_i / T


# ---------------------------------------------------------------- gas model


def test_hydrogen_preset():
    assert get_gas("hydrogen") is H
    assert (H.a2, H.kappa, H.T_ion) == (8314.0, 29.9774, 1.5780e5)
    assert H.a == pytest.approx(math.sqrt(8314.0))


def test_unknown_preset():
    with pytest.raises(DomainError):
        get_gas("argon")


@pytest.mark.parametrize("bad", [dict(a2=0.0), dict(kappa=-1.0), dict(T_ion=float("nan"))])
def test_gas_model_validation(bad):
    kw = dict(a2=1.0, kappa=1.0, T_ion=1.0) | bad
    with pytest.raises(DomainError):
        GasModel(**kw)


@pytest.mark.parametrize("alpha, T", [(0.0, 300.0), (1.0, 300.0), (0.5, -1.0), (1.2, 10.0)])
def test_state_validation(alpha, T):
    with pytest.raises(DomainError):
        ThermoState(alpha, T)


# ---------------------------------------------------------------- Saha


@pytest.mark.parametrize("T, expected", [(300.0, 3.5929e-114), (750.0, 3.8418e-45)])
def test_saha_table(T, expected):
    assert saha_alpha(1466.3, T, H) == pytest.approx(expected, rel=1e-3)


@pytest.mark.parametrize("T", [300.0, 750.0, 9559.53, 14042.0])
def test_saha_against_extended_precision(T):
    ref = oracles.mp_alpha(MP, oracles.mp.mpf(1466.3), oracles.mp.mpf(T))
    assert saha_alpha(1466.3, T, H) == pytest.approx(float(ref), rel=1e-13)


def test_saha_hot_case_inverts():
    alpha = saha_alpha(1466.3, 9559.53, H)
    assert 0 < alpha < 1
    assert pressure(alpha, 9559.53, H) == pytest.approx(1466.3, rel=1e-10)


def test_saha_underflows_gracefully():
    # e^(T_i/T) overflows; the log form stays finite
    log_alpha = saha_log_alpha(1e5, 50.0, H)
    assert np.isfinite(log_alpha) and log_alpha < -700
    assert saha_alpha(1e5, 50.0, H) == 0.0


@pytest.mark.parametrize("p, T", [(-1.0, 300.0), (0.0, 300.0), (1.0, 0.0), (np.nan, 1.0)])
def test_saha_domain(p, T):
    with pytest.raises(DomainError):
        saha_alpha(p, T, H)


def test_pressure_inverts_table_row():
    assert pressure(3.5929e-114, 300.0, H) == pytest.approx(1466.3, rel=1e-3)


def test_round_trip_fixed_point():
    p = pressure(0.5, 20000.0, H)
    assert saha_alpha(p, 20000.0, H) == pytest.approx(0.5, rel=1e-12)


@settings(max_examples=300, deadline=None)
@given(alphas, ratios)
def test_round_trip(alpha, ratio):
    T = H.T_ion / ratio
    p = pressure(alpha, T, H)
    assert saha_alpha(p, T, H) == pytest.approx(alpha, rel=1e-12)


def test_round_trip_vectorized_grid():
    a, r = np.meshgrid(np.geomspace(1e-6, 0.5, 40), np.geomspace(0.05, 500, 40))
    a = np.concatenate([a.ravel(), 1 - a.ravel()])
    T = np.concatenate([H.T_ion / r.ravel()] * 2)
    p = pressure(a, T, H)
    np.testing.assert_allclose(saha_alpha(p, T, H), a, rtol=1e-12)


def test_pressure_monotone():
    T = H.T_ion / np.geomspace(0.05, 500, 30)
    a = np.geomspace(1e-6, 1 - 1e-6, 200)
    p = pressure(a[None, :], T[:, None], H)
    assert np.all(np.diff(p, axis=1) < 0)
    assert np.all(np.diff(p[::-1], axis=0) > 0)


def test_pressure_vanishes_near_full_ionization():
    p = pressure(1 - np.geomspace(1e-2, 1e-12, 6), 20000.0, H)
    assert np.all(np.diff(p) < 0) and p[-1] < 1e-8 * p[0]


# ---------------------------------------------------------------- caloric


def test_ideal_gas_limit():
    s = ThermoState(1e-200, 500.0)
    e, Hh = energy_enthalpy(s, H)
    assert e == pytest.approx(1.5 * H.a2 * 500.0, rel=1e-15)
    assert Hh == pytest.approx(2.5 * H.a2 * 500.0, rel=1e-15)


@settings(max_examples=200, deadline=None)
@given(alphas, ratios)
def test_enthalpy_minus_energy_is_pv(alpha, ratio):
    s = ThermoState(alpha, H.T_ion / ratio)
    e, Hh = energy_enthalpy(s, H)
    assert Hh - e == pytest.approx(H.a2 * s.theta, rel=1e-12)
    assert Hh - e == pytest.approx(s.pressure(H) * s.specific_volume(H), rel=1e-12)


def test_energy_extended_precision():
    s = ThermoState(0.0109, 9559.53)
    ref = oracles.mp_energy(MP, oracles.mp.mpf("0.0109"), oracles.mp.mpf("9559.53"))
    assert energy_enthalpy(s, H)[0] == pytest.approx(float(ref), rel=1e-14)


def test_entropy_half_ionized():
    T = 20000.0
    assert entropy_eta(ThermoState(0.5, T), H) == pytest.approx(1.5 * (2.5 + H.T_ion / T), rel=1e-14)


@pytest.mark.parametrize("alpha, T", [(1e-3, 5000.0), (0.3, 20000.0), (0.9, 60000.0)])
def test_entropy_gibbs_relation(alpha, T):
    # T dS = de + p dv, i.e. a2 T deta = de + p dv along any path
    mp = oracles.mp
    a0, T0 = mp.mpf(alpha), mp.mpf(T)

    def path(t):
        return a0 * (1 + t), T0 * (1 + 2 * t)

    def f(func):
        return lambda t: func(MP, *path(t))

    de = mp.diff(f(oracles.mp_energy), 0)
    dv = mp.diff(lambda t: 1 / oracles.mp_rho(MP, *path(t)), 0)
    s = lambda t: entropy_eta(ThermoState(float(path(t)[0]), float(path(t)[1])), H)
    h = 1e-6
    deta = (s(h) - s(-h)) / (2 * h)
    p = oracles.mp_pressure(MP, a0, T0)
    assert H.a2 * T * deta == pytest.approx(float(de + p * dv), rel=1e-7)


# ---------------------------------------------------------------- sound speed


@pytest.mark.parametrize(
    "alpha, T", [(0.0965, 14042.0), (0.0109, 9559.53), (0.5, 20000.0), (1e-4, 3000.0), (0.97, 80000.0)]
)
def test_sound_speed_extended_precision(alpha, T):
    ref = float(oracles.mp_sound_speed(MP, alpha, T))
    assert sound_speed(ThermoState(alpha, T), H) == pytest.approx(ref, rel=1e-12)


def test_sound_speed_frozen_limits():
    for alpha in (1e-300, 1 - 1e-16):
        s = ThermoState(alpha, 1e4)
        assert sound_speed_factor_sq(s, H) == pytest.approx(1.0, abs=1e-12)
        assert sound_speed(s, H) == pytest.approx(math.sqrt(H.a2 * 5 * s.theta / 3), rel=1e-12)


def test_sound_speed_factor_bounds_grid():
    a, r = np.meshgrid(np.linspace(0.01, 0.99, 99), np.geomspace(0.1, 100, 120))
    f = sound_speed_factor_sq(ThermoState(a, H.T_ion / r), H)
    assert np.all(f > 0.6) and np.all(f <= 1.0)


# ---------------------------------------------------------------- p_eta


@pytest.mark.parametrize("alpha, T", [(0.0965, 14042.0), (0.01, 7000.0), (0.6, 30000.0)])
def test_p_eta_extended_precision(alpha, T):
    ref = float(oracles.mp_p_eta(MP, alpha, T))
    assert p_eta(ThermoState(alpha, T), H) == pytest.approx(ref, rel=1e-10)


def test_p_eta_cold_limit():
    s = ThermoState(1e-200, 500.0)
    assert p_eta(s, H) == pytest.approx(2 * s.pressure(H) / 3, rel=1e-14)


def test_p_eta_positive_grid():
    a, r = np.meshgrid(np.linspace(1e-4, 1 - 1e-4, 101), np.geomspace(0.01, 1000, 101))
    state = ThermoState(a, H.T_ion / r)
    # e^(-T_i/T) underflows for the coldest rows; a tiny kappa rescales p
    # without changing the sign of the closed form
    scaled = GasModel(H.a2, 1e-300, H.T_ion)
    with np.errstate(over="ignore"):
        values = np.where(r < 500, p_eta(state, H), p_eta(state, scaled))
    assert np.all(np.isfinite(values)) and np.all(values > 0)


# ---------------------------------------------------------------- GNL / curvature


def test_gnl_reference_state():
    assert 60 * (9559.53 / H.T_ion) ** 3 > 0.0109
    assert gnl_sufficient(ThermoState(0.0109, 9559.53), H)


def test_gnl_hot_branch():
    assert gnl_sufficient(ThermoState(0.99, H.T_ion), H)


def test_gnl_not_certified():
    assert not gnl_sufficient(ThermoState(1e-3, H.T_ion / 100), H)


@settings(max_examples=200, deadline=None)
@given(alphas, ratios, st.floats(0.0, 1.0))
def test_gnl_monotone_in_alpha(alpha, ratio, shrink):
    T = H.T_ion / ratio
    if gnl_sufficient(ThermoState(alpha, T), H):
        assert gnl_sufficient(ThermoState(max(alpha * shrink, 1e-300), T), H)


def test_curvature_convex_example():
    for alpha in (1e-3, 0.25, 0.5, 0.9):
        value, cert = integral_curve_curvature(ThermoState(alpha, H.T_ion / 2), H)
        assert value > 0 and cert is Curvature.CONVEX


def test_curvature_concave_example():
    value, cert = integral_curve_curvature(ThermoState(0.1, H.T_ion / 50), H)
    assert value < 0 and cert is Curvature.CONCAVE


def test_curvature_uncertified():
    _, cert = integral_curve_curvature(ThermoState(0.5, H.T_ion / 50), H)
    assert cert is Curvature.UNCERTIFIED


def test_concavity_threshold_at_quarter():
    assert concavity_threshold(0.25) == pytest.approx(CONCAVE_TEMPERATURE_RATIO, rel=1e-5)
    assert concavity_threshold(0.5) == math.inf


@pytest.mark.parametrize("alpha", [0.05, 0.15, 0.25])
def test_curvature_sign_flips_at_threshold(alpha):
    r0 = concavity_threshold(alpha)
    below, _ = integral_curve_curvature(ThermoState(alpha, H.T_ion / (r0 * 0.99)), H)
    above, _ = integral_curve_curvature(ThermoState(alpha, H.T_ion / (r0 * 1.01)), H)
    assert below > 0 > above


@pytest.mark.parametrize("alpha, ratio", [(0.1, 50.0), (0.3, 2.0), (0.02, 10.0), (0.7, 20.0)])
def test_curvature_extended_precision(alpha, ratio):
    T = H.T_ion / ratio
    ref = float(oracles.mp_isentrope_curvature(MP, alpha, T))
    value, _ = integral_curve_curvature(ThermoState(alpha, T), H)
    assert value == pytest.approx(ref, rel=1e-9)


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-4, 1 - 1e-4), st.floats(0.1, 500.0))
def test_curvature_classification_agrees_with_sign(alpha, ratio):
    value, cert = integral_curve_curvature(ThermoState(alpha, H.T_ion / ratio), H)
    if cert is Curvature.CONVEX:
        assert value > 0
    elif cert is Curvature.CONCAVE:
        assert value < 0


def test_properties_record():
    rec = properties(ThermoState.from_pressure(1466.3, 300.0, H), H)
    assert rec["p"] == pytest.approx(1466.3, rel=1e-12)
    assert rec["v"] * rec["rho"] == pytest.approx(1.0, rel=1e-14)
    assert set(rec) >= {"alpha", "log_alpha", "T", "theta", "e", "H", "eta", "c", "p_eta"}
