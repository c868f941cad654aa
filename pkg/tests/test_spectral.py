import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lzbloch.dynamics import DriveSpec, IntegratorConfig, integrate
from lzbloch.errors import DomainError, ValidationError
from lzbloch.model import BlochState, HamiltonianParams, SystemParams
from lzbloch.spectral import (
    Window,
    asymptotic_samples,
    band_envelope,
    fit_population_envelope,
    phi_from_state,
    power_law_exponent,
    spectrum,
    spectrum_of_trajectory,
    x_tilde_asymptotic,
    z_tilde_asymptotic,
    z_tilde_envelope,
)


def test_gaussian_transform():
    t = np.arange(-40, 40, 0.01)
    s = spectrum(t, np.exp(-t**2 / 2), Window.NONE)
    expected = math.sqrt(2 * math.pi) * np.exp(-s.omega**2 / 2)
    np.testing.assert_allclose(s.values, expected, atol=1e-10)


def test_time_shift_is_a_phase():
    t = np.arange(0, 80, 0.01)
    s = spectrum(t, np.exp(-((t - 40) ** 2) / 2), Window.NONE)
    expected = math.sqrt(2 * math.pi) * np.exp(-s.omega**2 / 2 - 1j * s.omega * 40)
    np.testing.assert_allclose(s.values, expected, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=8, max_size=64), st.floats(0.01, 2))
def test_parseval_and_conjugate_symmetry(values, dt):
    x = np.array(values)
    t = dt * np.arange(len(x))
    s = spectrum(t, x, Window.NONE)
    dw = 2 * math.pi / (len(x) * dt)
    assert np.sum(np.abs(s.values) ** 2) * dw / (2 * math.pi) == pytest.approx(
        np.sum(x**2) * dt, rel=1e-9, abs=1e-12
    )
    lookup = dict(zip(np.round(s.omega / dw).astype(int), s.values))
    for k, v in lookup.items():
        if -k in lookup:
            assert lookup[-k] == pytest.approx(np.conj(v), abs=1e-9)


def test_ordering_and_csv():
    t = np.arange(0, 10, 0.5)
    s = spectrum(t, np.cos(t))
    assert np.all(np.diff(s.omega) > 0)
    assert s.to_csv().splitlines()[0] == "omega,re,im,abs"
    assert len(s.to_csv().splitlines()) == len(t) + 1


def test_rejects_irregular_sampling():
    with pytest.raises(ValidationError):
        spectrum([0.0, 1.0, 2.5], [1.0, 2.0, 3.0])
    with pytest.raises(ValidationError):
        spectrum([0.0], [1.0])


def test_asymptotic_forms():
    w = np.array([2.0, 3.0, 5.0])
    z = z_tilde_asymptotic(w, 0.12, 0.063)
    np.testing.assert_allclose(z_tilde_asymptotic(-w, 0.12, 0.063), np.conj(z))
    assert np.all(np.abs(z) <= z_tilde_envelope(w, 0.12, 0.063) * (1 + 1e-12))
    x = x_tilde_asymptotic(w, 0.12, 0.063)
    assert x.shape == w.shape
    assert isinstance(z_tilde_asymptotic(2.0, 0.12, 0.063), complex)
    samples = asymptotic_samples(w, 0.12, 0.063)
    assert samples[1].z_tilde == pytest.approx(z[1])
    with pytest.raises(DomainError):
        z_tilde_asymptotic(0.0, 0.12, 0.063)
    with pytest.raises(ValidationError):
        z_tilde_asymptotic(1.0, 0.12, -1.0)


def test_envelope_is_reached_where_branches_align():
    delta, slope = 0.3, 0.5
    w = np.linspace(2, 4, 20001)
    z = np.abs(z_tilde_asymptotic(w, delta, slope))
    env = z_tilde_envelope(w, delta, slope)
    assert np.max(z / env) == pytest.approx(1, abs=1e-6)


def test_band_envelope_and_power_law():
    w = np.geomspace(1, 100, 500)
    centres, peaks = band_envelope(w, 3 / w**2, (1, 100), n_bins=10)
    assert len(centres) == 10
    assert power_law_exponent(centres, peaks) == pytest.approx(-2, abs=0.05)


def unitary_sweep(delta, slope, t_max, dt):
    h = HamiltonianParams(delta=delta)
    traj = integrate(
        SystemParams(h), DriveSpec.linear(slope), BlochState.up(), (-t_max, t_max),
        IntegratorConfig(sample_dt=dt, rtol=1e-11, atol=1e-13),
    )
    return traj


def test_phi_derivative_recovers_population():
    delta, slope = 0.5, 0.25
    traj = unitary_sweep(delta, slope, 40.0, 0.01)
    phi = phi_from_state(traj.times, traj.states, delta, slope)
    dphi = np.gradient(phi, traj.times, edge_order=2)
    recovered = delta / slope * dphi
    away = np.abs(slope * traj.times) > delta
    away[:2] = away[-2:] = False
    assert np.max(np.abs(recovered - traj.z)[away]) < 1e-3
    assert phi_from_state(0.0, BlochState(0.2, 0, 0.5), delta, slope) == pytest.approx(0.2)
    with pytest.raises(DomainError):
        phi_from_state(1.0, BlochState.up(), 0.0, slope)


def test_population_spectrum_fit_reports_overlay():
    delta, slope = 0.5, 0.25
    traj = unitary_sweep(delta, slope, 60.0, 0.02)
    spec = spectrum_of_trajectory(traj, "z")
    fit = fit_population_envelope(spec, delta, slope, (4 * delta, 12 * delta), n_bins=8)
    assert fit.scale > 0
    assert fit.to_csv().splitlines()[0] == "omega,measured_abs,model_abs"
    assert np.all(np.isfinite(fit.model))
    with pytest.raises(ValidationError):
        spectrum_of_trajectory(traj, "W")
