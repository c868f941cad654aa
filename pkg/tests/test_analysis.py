import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lzbloch.analysis import (
    cycle_stats,
    hysteresis,
    kinks,
    level_jump,
    loops_to_csv,
    moving_average,
    pulse_asymmetry,
    reversal_onsets,
    shoelace_area,
    stats_to_csv,
)
from lzbloch.dynamics import DriveSpec, Trajectory, drive_value, find_drive_zeros, integrate
from lzbloch.errors import ValidationError
from lzbloch.model import BlochState, HamiltonianParams, SystemParams, uniaxial


def synthetic(z_of_t, omega0=0.1, periods=3, n_per=400):
    d = DriveSpec.cosine(1.0, omega0)
    t = np.linspace(0, periods * d.period, int(periods * n_per) + 1)
    z = z_of_t(t)
    states = np.column_stack([np.zeros_like(t), np.zeros_like(t), z])
    h = HamiltonianParams(b0=1.0, omega0_freq=omega0)
    events = tuple(find_drive_zeros(d, (t[0], t[-1])))
    return Trajectory(t, states, events, SystemParams(h), d), d


def test_constant_population():
    traj, d = synthetic(lambda t: -np.ones_like(t))
    stats = cycle_stats(traj, d)
    assert len(stats) == 3
    assert all(s.z_mean == pytest.approx(-1) for s in stats)
    assert kinks(traj) == []
    assert pulse_asymmetry(traj, d) == pytest.approx([0, 0, 0])


def test_mean_of_rectified_drive():
    # the mean of |omega0| over a cycle is 2 b0 / pi
    traj, d = synthetic(lambda t: np.abs(np.cos(0.1 * t)), n_per=4000)
    for s in cycle_stats(traj, d):
        assert s.z_mean == pytest.approx(2 / math.pi, abs=1e-5)
        assert s.z_min <= s.z_mean <= s.z_max


def test_locked_sinusoid_is_mirror_symmetric():
    traj, d = synthetic(lambda t: 0.5 * np.cos(0.1 * t))
    assert max(pulse_asymmetry(traj, d)) < 1e-12
    loops = hysteresis(traj, d)
    assert max(abs(lp.area) for lp in loops) < 1e-12


def test_step_changes_are_kinks_only_at_zeros():
    # a level switching exactly at each drive zero
    traj, d = synthetic(lambda t: np.sign(np.cos(0.1 * t)) * 0.8)
    found = kinks(traj)
    assert found == pytest.approx(list(traj.events))
    assert set(found) <= set(traj.events)


def test_quadrature_lag_loop_area():
    # Z lags the bias by a quarter period: an ellipse of area pi * 1 * 0.5
    traj, d = synthetic(lambda t: 0.5 * np.sin(0.1 * t))
    loops = hysteresis(traj, d)
    for lp in loops:
        assert abs(lp.area) == pytest.approx(math.pi * 0.5, rel=1e-4)
        assert lp.normalized_area == pytest.approx(math.pi / 4, rel=1e-4)
        assert lp.closure_gap < 1e-12
    assert {lp.orientation for lp in loops} == {loops[0].orientation}


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=3, max_size=30))
def test_shoelace_reversal_negates(points):
    b, z = np.array(points).T
    assert shoelace_area(b[::-1], z[::-1]) == pytest.approx(-shoelace_area(b, z), abs=1e-9)
    # cyclic relabelling of the start point leaves the area unchanged
    assert shoelace_area(np.roll(b, 3), np.roll(z, 3)) == pytest.approx(shoelace_area(b, z), abs=1e-9)


def test_unit_square():
    assert shoelace_area([0, 1, 1, 0], [0, 0, 1, 1]) == pytest.approx(1)


def test_errors():
    traj, d = synthetic(lambda t: np.zeros_like(t), periods=1)
    with pytest.raises(ValidationError):
        hysteresis(traj, d)
    short, d2 = synthetic(lambda t: np.zeros_like(t), periods=0.5)
    with pytest.raises(ValidationError):
        cycle_stats(short, d2)
    with pytest.raises(ValidationError):
        hysteresis(traj, DriveSpec.linear(1.0))


def test_helpers():
    assert moving_average([1.0, 2.0, 3.0], 1).tolist() == [1, 2, 3]
    np.testing.assert_allclose(moving_average(np.ones(10), 3), np.ones(10))
    t = np.arange(100.0)
    jump = level_jump(t, (t >= 50).astype(float), 2, 10)
    assert jump[50] == pytest.approx(1)
    assert jump[20] == 0


def test_csv_layouts():
    traj, d = synthetic(lambda t: 0.5 * np.sin(0.1 * t))
    loops = hysteresis(traj, d)
    text = loops_to_csv(loops)
    assert text.splitlines()[0] == "cycle,b,z"
    stats = stats_to_csv(cycle_stats(traj, d), loops, pulse_asymmetry(traj, d))
    lines = stats.splitlines()
    assert lines[0] == "cycle,z_mean,z_min,z_max,n_kinks,area,asymmetry"
    assert len(lines) == 4


def test_fig2_kinks_are_crossings(fig2_run):
    traj, _ = fig2_run
    found = kinks(traj)
    assert set(found) <= set(traj.events)
    assert len(found) >= 15


def test_symmetry_broken_run_keeps_sign(fig3_run):
    traj, s = fig3_run
    assert all(c.z_max < 0 for c in cycle_stats(traj, s.drive))


def test_overdamped_loops(fig8_run):
    traj, s = fig8_run
    loops = hysteresis(traj, s.drive)[1:]
    assert len({lp.orientation for lp in loops}) == 1
    assert all(lp.closure_gap < 0.05 for lp in loops)
    for zero, onset in reversal_onsets(traj, s.drive):
        assert onset - zero < 0.02 * s.drive.period
    assert min(pulse_asymmetry(traj, s.drive)[1:]) > 0.1


def test_loop_area_shift_by_one_period(fig8_run):
    traj, s = fig8_run
    p = s.drive.period
    sub = traj.times >= p - 1e-9
    shifted = Trajectory(traj.times[sub] - p, traj.states[sub], (), traj.params, traj.drive)
    a = hysteresis(traj, s.drive)[2].area
    b = hysteresis(shifted, s.drive)[1].area
    assert abs(b) == pytest.approx(abs(a), rel=1e-6)


def test_isotropic_damping_shrinks_loops_like_scaled_unitary_run():
    g = 0.002
    h = HamiltonianParams(delta=0.12, b0=1.0, omega0_freq=0.063)
    d = DriveSpec.from_hamiltonian(h)
    span = (0.0, 4 * d.period)
    unitary = integrate(SystemParams(h), d, BlochState.down(), span)
    damped = integrate(SystemParams(h, uniaxial(g, g), "homogeneous"), d, BlochState.down(), span)
    for k, lp in enumerate(hysteresis(damped, d)):
        sel = (unitary.times >= k * d.period - 1e-9) & (unitary.times <= (k + 1) * d.period + 1e-9)
        b = drive_value(unitary.times[sel], d)
        z = unitary.z[sel] * np.exp(-g * unitary.times[sel])
        assert lp.area == pytest.approx(shoelace_area(b, z), rel=1e-5, abs=1e-9)
