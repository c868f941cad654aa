import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from conftest import PAULI
from lzbloch.dynamics import (
    DriveKind,
    DriveSpec,
    IntegratorConfig,
    drive_value,
    find_drive_zeros,
    generator_at,
    integrate,
    read_trajectory_csv,
    sample_times,
)
from lzbloch.errors import UnphysicalState, ValidationError
from lzbloch.model import (
    BlochState,
    DissipatorParams,
    HamiltonianParams,
    SystemParams,
    rates_from_coupling,
    thermal_bath,
    uniaxial,
)


def _superop(left, right):
    # row-major vec: vec(L rho R) = kron(L, R.T) vec(rho)
    return np.kron(left, right.T)


def density_matrix_reference(delta, delta_prime, a, d, v0, t_eval):
    """Integrate the 2x2 master equation (as a 4x4 Liouvillian) with scipy; return Bloch vectors."""
    sx, sy, sz = PAULI
    eye = np.eye(2)

    def commutator(h):
        return -1j * (_superop(h, eye) - _superop(eye, h))

    static = commutator(0.5 * (delta * sx + delta_prime * sy))
    for i in range(3):
        for j in range(3):
            si, sj = PAULI[i], PAULI[j]
            static = static + a[i, j] * (
                _superop(si, sj) - 0.5 * (_superop(sj @ si, eye) + _superop(eye, sj @ si))
            )
    bias = commutator(0.5 * sz)

    def rhs(t, vec):
        return static @ vec + float(drive_value(t, d)) * (bias @ vec)

    rho0 = 0.5 * (eye + sum(c * s for c, s in zip(v0, PAULI)))
    sol = solve_ivp(rhs, (t_eval[0], t_eval[-1]), rho0.ravel().astype(complex),
                    method="DOP853", t_eval=t_eval, rtol=1e-12, atol=1e-13)
    rhos = sol.y.T.reshape(-1, 2, 2)
    return np.array([[np.trace(s @ r).real for s in PAULI] for r in rhos])


small = st.floats(0, 0.05)


@settings(max_examples=8, deadline=None)
@given(
    st.floats(0.02, 0.3),
    st.floats(-0.1, 0.1),
    st.floats(0.02, 0.1),
    st.lists(st.complex_numbers(max_magnitude=0.15), min_size=9, max_size=9),
)
def test_matches_density_matrix_master_equation(delta, delta_prime, omega0, entries):
    b = np.array(entries).reshape(3, 3)
    a = b @ b.conj().T
    h = HamiltonianParams(delta=delta, delta_prime=delta_prime, b0=1.0, omega0_freq=omega0)
    p = SystemParams(h, rates_from_coupling(a), "homogeneous")
    d = DriveSpec.from_hamiltonian(h)
    v0 = np.array([0.3, -0.2, 0.5])
    t_span = (0.0, d.period)
    traj = integrate(p, d, v0, t_span)
    ref = density_matrix_reference(delta, delta_prime, a, d, v0, traj.times)
    np.testing.assert_allclose(traj.states, ref, atol=2e-8)


def test_linear_sweep_matches_reference():
    h = HamiltonianParams(delta=0.8)
    a = np.diag([0.01, 0.0, 0.02]).astype(complex)
    p = SystemParams(h, rates_from_coupling(a))
    d = DriveSpec.linear(0.5)
    traj = integrate(p, d, BlochState.up(), (-20.0, 20.0), IntegratorConfig(sample_dt=0.5))
    ref = density_matrix_reference(0.8, 0.0, a, d, [0, 0, 1], traj.times)
    np.testing.assert_allclose(traj.states, ref, atol=2e-8)
    assert traj.events == (0.0,)


def test_static_field_precession():
    # delta = 0, constant bias: rotation about z at angular frequency b0
    h = HamiltonianParams(delta=0.0, b0=0.7, omega0_freq=0.0)
    d = DriveSpec.from_hamiltonian(h)
    traj = integrate(SystemParams(h), d, [1, 0, 0], (0.0, 30.0), IntegratorConfig(sample_dt=0.1))
    np.testing.assert_allclose(traj.x, np.cos(0.7 * traj.times), atol=1e-8)
    np.testing.assert_allclose(traj.y, np.sin(0.7 * traj.times), atol=1e-8)
    assert traj.events == ()


def test_linearity_without_drift():
    h = HamiltonianParams(delta=0.2, b0=1.0, omega0_freq=0.05)
    p = SystemParams(h, uniaxial(0.01, 0.03), "homogeneous")
    d = DriveSpec.from_hamiltonian(h)
    span = (0.0, d.period)
    va = np.array([0.4, 0.0, 0.3])
    vb = np.array([0.0, -0.2, 0.5])
    a = integrate(p, d, va, span).states
    b = integrate(p, d, vb, span).states
    ab = integrate(p, d, va + vb, span).states
    np.testing.assert_allclose(ab, a + b, atol=1e-9)


@pytest.mark.parametrize("g", [0.01, 0.05])
def test_isotropic_damping_scales_norm(g):
    h = HamiltonianParams(delta=0.12, b0=1.0, omega0_freq=0.063)
    d = DriveSpec.from_hamiltonian(h)
    p = SystemParams(h, uniaxial(g, g), "homogeneous")
    traj = integrate(p, d, BlochState.down(), (0.0, 2 * d.period))
    scaled = traj.norms * np.exp(g * traj.times)
    assert np.max(np.abs(scaled - 1)) < 1e-7


def test_sign_following_equals_fixed_drift_between_zeros():
    h = HamiltonianParams(delta=0.05, b0=1.0, omega0_freq=0.02)
    d = DriveSpec.from_hamiltonian(h)
    span = (0.0, 0.9 * math.pi / 2 / 0.02)  # before the first zero, omega0 > 0
    sf = SystemParams(h, uniaxial(0.035, 0.07), "sign_following")
    fixed = SystemParams(h, DissipatorParams(gamma1=0.035, gamma2=0.035, gamma3=0.07, c3=-0.07), "homogeneous")
    a = integrate(sf, d, BlochState.up(), span)
    b = integrate(fixed, d, BlochState.up(), span)
    np.testing.assert_array_equal(a.states, b.states)


def test_sign_following_flips_drift_at_zeros():
    h = HamiltonianParams(delta=0.05, b0=1.0, omega0_freq=0.02)
    d = DriveSpec.from_hamiltonian(h)
    p = SystemParams(h, uniaxial(0.035, 0.07), "sign_following")
    before = generator_at(math.pi / 2 / 0.02 - 1, p, d)[1][2]
    at = generator_at(math.pi / 2 / 0.02, p, d)[1][2]
    after = generator_at(math.pi / 2 / 0.02 + 1, p, d)[1][2]
    assert (before, at, after) == (-0.07, 0.0, 0.07)


def test_thermal_bath_relaxes_to_equilibrium():
    # static bias; the bath drives Z toward c3 / gamma3 = -1 / (2 n + 1)
    g, n = 0.2, 1.0
    h = HamiltonianParams(delta=0.0, b0=1.0)
    d = DriveSpec.from_hamiltonian(h)
    p = SystemParams(h, thermal_bath(g, n), "homogeneous")
    traj = integrate(p, d, BlochState.up(), (0.0, 200.0))
    assert traj.z[-1] == pytest.approx(-1 / (2 * n + 1), abs=1e-9)


def test_drive_zeros():
    d = DriveSpec.cosine(1.0, 0.5)
    zeros = find_drive_zeros(d, (0.0, 4 * math.pi))
    assert zeros == pytest.approx([math.pi, 3 * math.pi])
    assert find_drive_zeros(d, (math.pi, math.pi)) == pytest.approx([math.pi])
    assert find_drive_zeros(DriveSpec.cosine(1.0, 0.0), (0, 10)) == []
    assert find_drive_zeros(DriveSpec.linear(2.0), (-1, 1)) == [0.0]
    assert find_drive_zeros(DriveSpec.linear(2.0), (1, 2)) == []


def test_drive_spec_validation():
    with pytest.raises(ValidationError):
        DriveSpec("triangle")
    with pytest.raises(ValidationError):
        DriveSpec.linear(0.0)
    with pytest.raises(ValidationError):
        DriveSpec.cosine(1.0, -1.0)
    assert DriveSpec.cosine(1, 0.5).period == pytest.approx(4 * math.pi)
    assert math.isinf(DriveSpec.linear(1).period)
    assert DriveSpec.linear(1).kind is DriveKind.LINEAR_SWEEP


def test_integrator_config_validation():
    with pytest.raises(ValidationError):
        IntegratorConfig(rtol=0)
    with pytest.raises(ValidationError):
        IntegratorConfig(dt_max=-1)
    with pytest.raises(ValidationError):
        IntegratorConfig(dt_init=1.0, dt_max=0.5)
    cfg = IntegratorConfig().resolved(DriveSpec.cosine(1, 0.1), (0, 1))
    assert cfg.dt_max == pytest.approx(2 * math.pi / 0.1 / 200)
    assert cfg.sample_dt == pytest.approx(2 * math.pi / 0.1 / 1000)


def test_integrate_rejects_bad_input():
    h = HamiltonianParams(delta=0.1, b0=1.0, omega0_freq=0.1)
    d = DriveSpec.from_hamiltonian(h)
    with pytest.raises(ValidationError):
        integrate(SystemParams(h), d, [0, 0, 1], (1.0, 1.0))
    with pytest.raises(ValidationError):
        integrate(SystemParams(h), d, [1, 1, 1], (0.0, 1.0))
    h0 = HamiltonianParams(delta=0.1, b0=0.0, omega0_freq=0.1)
    p = SystemParams(h0, uniaxial(0.1, 0.1), "sign_following")
    with pytest.raises(ValidationError):
        integrate(p, DriveSpec.from_hamiltonian(h0), [0, 0, 1], (0.0, 1.0))


def test_unphysical_growth_is_reported():
    # negative damping is not completely positive and blows the vector up
    h = HamiltonianParams(delta=0.1, b0=1.0, omega0_freq=0.1)
    p = SystemParams(h, uniaxial(-0.05, -0.05), "homogeneous")
    with pytest.raises(UnphysicalState) as info:
        integrate(p, DriveSpec.from_hamiltonian(h), [0, 0, 1], (0.0, 50.0))
    assert 0 <= info.value.last_time < 50


def test_sampling_grid_and_events(fig2_run):
    traj, s = fig2_run
    assert len(traj.events) == 20
    steps = np.diff(traj.times)
    assert np.allclose(steps, steps[0], rtol=0, atol=1e-9)
    assert traj.times[0] == 0 and traj.times[-1] == pytest.approx(s.t_span[1])
    assert traj.states.flags.writeable is False


def test_sample_times_appends_endpoint():
    t = sample_times(0.0, 1.05, 0.1)
    assert t[-1] == 1.05 and t[-2] == pytest.approx(1.0)


def test_deterministic_and_csv_roundtrip(tmp_path):
    h = HamiltonianParams(delta=0.12, b0=1.0, omega0_freq=0.063)
    d = DriveSpec.from_hamiltonian(h)
    a = integrate(SystemParams(h), d, BlochState.down(), (0.0, d.period))
    b = integrate(SystemParams(h), d, BlochState.down(), (0.0, d.period))
    assert a.to_csv() == b.to_csv()
    path = tmp_path / "traj.csv"
    path.write_text(a.to_csv())
    times, states, omega0 = read_trajectory_csv(path)
    np.testing.assert_array_equal(times, a.times)
    np.testing.assert_array_equal(states, a.states)
    np.testing.assert_array_equal(omega0, a.omega0)
    assert a.events_to_csv().splitlines()[0] == "t_zero"


def test_read_rejects_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValidationError):
        read_trajectory_csv(path)
