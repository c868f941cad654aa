"""Post-processing of trajectories: kinks, per-cycle statistics, hysteresis loops."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DriveKind, drive_value
from .errors import ValidationError

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

KINK_RATIO = 5.0
KINK_MIN_JUMP = 1e-3
SMOOTH_FRACTION = 1 / 100
KINK_GAP_FRACTION = 1 / 50
KINK_REACH_FRACTION = 1 / 10


@dataclass(frozen=True)
class CycleStats:
    cycle_index: int
    z_mean: float
    z_min: float
    z_max: float
    kink_times: tuple


@dataclass(frozen=True)
class HysteresisLoop:
    """``(omega0, Z)`` samples over one drive period with the shoelace area."""

    points: np.ndarray
    area: float
    cycle_index: int

    @property
    def bounding_box_area(self):
        b, z = self.points[:, 0], self.points[:, 1]
        return float((b.max() - b.min()) * (z.max() - z.min()))

    @property
    def normalized_area(self):
        box = self.bounding_box_area
        return self.area / box if box > 0 else 0.0

    @property
    def closure_gap(self):
        return float(abs(self.points[-1, 1] - self.points[0, 1]))

    @property
    def orientation(self):
        return int(np.sign(self.area))


def _reference_period(traj):
    period = traj.drive.period
    if math.isfinite(period):
        return period
    return float(traj.times[-1] - traj.times[0])


def moving_average(values, width):
    """Centered boxcar average over ``width`` samples, shrinking at the edges."""
    width = max(1, int(width))
    if width == 1:
        return np.asarray(values, dtype=float).copy()
    kernel = np.ones(width)
    num = np.convolve(values, kernel, mode="same")
    den = np.convolve(np.ones(len(values)), kernel, mode="same")
    return num / den


def level_jump(times, z, gap, reach):
    """Difference of the mean of ``z`` over ``[t+gap, t+reach]`` and ``[t-reach, t-gap]``.

    Evaluated at every sample of a uniform grid; windows are truncated at the ends.
    """
    dt = times[1] - times[0]
    n_in = int(round(gap / dt))
    n_out = max(n_in + 1, int(round(reach / dt)))
    csum = np.concatenate(([0.0], np.cumsum(z)))
    idx = np.arange(len(z))

    def window_mean(a, b):
        a = np.clip(a, 0, len(z))
        b = np.clip(b, 0, len(z))
        return (csum[b] - csum[a]) / np.maximum(b - a, 1)

    return window_mean(idx + n_in, idx + n_out + 1) - window_mean(idx - n_out, idx - n_in + 1)


def kink_strengths(traj):
    """Plateau jump of the smoothed ``Z`` at each drive zero and the per-cycle threshold.

    ``Z`` is smoothed with a moving average of width period/100. The jump
    compares its mean level on either side of a sample, skipping period/50
    around it (the crossing itself) and reaching out to period/10. A zero is
    a kink when its jump exceeds ``KINK_RATIO`` times the median jump of its
    cycle, and at least ``KINK_MIN_JUMP``. Returns ``(events, jumps, thresholds)``.
    """
    period = _reference_period(traj)
    times, z = traj.times, traj.z
    if len(times) < 3 or not traj.events:
        return np.array([]), np.array([]), np.array([])
    dt = times[1] - times[0]
    smooth = moving_average(z, round(period * SMOOTH_FRACTION / dt))
    jumps = np.abs(level_jump(times, smooth, period * KINK_GAP_FRACTION, period * KINK_REACH_FRACTION))
    t0 = times[0]
    events = np.array(traj.events)
    at_events = np.interp(events, times, jumps)
    thresholds = np.empty(len(events))
    for i, e in enumerate(events):
        k = math.floor((e - t0) / period)
        sel = (times >= t0 + k * period) & (times <= t0 + (k + 1) * period)
        if sel.sum() < 3:
            sel = slice(None)
        thresholds[i] = max(KINK_RATIO * float(np.median(jumps[sel])), KINK_MIN_JUMP)
    return events, at_events, thresholds


def kinks(traj):
    """Drive zeros at which the smoothed population changes level abruptly."""
    events, jumps, thresholds = kink_strengths(traj)
    return [float(e) for e, j, th in zip(events, jumps, thresholds) if j > th]


def _cycle_bounds(traj, d):
    if d.kind is not DriveKind.COSINE or not math.isfinite(d.period):
        raise ValidationError("cycle analysis needs a periodic cosine drive")
    period = d.period
    t0, t1 = traj.times[0], traj.times[-1]
    n = int(math.floor((t1 - t0) / period + 1e-9))
    if n < 1:
        raise ValidationError("trajectory is shorter than one drive period")
    return [(t0 + k * period, t0 + (k + 1) * period) for k in range(n)]


def _cycle_slice(times, a, b):
    tol = 1e-9 * max(1.0, abs(b))
    return (times >= a - tol) & (times <= b + tol)


def cycle_stats(traj, d):
    """Per-period mean (trapezoidal), extrema and kink times of ``Z``."""
    bounds = _cycle_bounds(traj, d)
    kink_times = kinks(traj)
    out = []
    for k, (a, b) in enumerate(bounds):
        sel = _cycle_slice(traj.times, a, b)
        t, z = traj.times[sel], traj.z[sel]
        out.append(
            CycleStats(
                k,
                float(_trapezoid(z, t) / (t[-1] - t[0])),
                float(z.min()),
                float(z.max()),
                tuple(e for e in kink_times if a <= e < b),
            )
        )
    return out


def shoelace_area(b, z):
    """Signed area of the closed polygon through ``(b, z)``; counter-clockwise is positive."""
    b = np.asarray(b, dtype=float)
    z = np.asarray(z, dtype=float)
    return 0.5 * float(np.dot(b, np.roll(z, -1)) - np.dot(z, np.roll(b, -1)))


def hysteresis(traj, d):
    """One ``(omega0, Z)`` loop per drive period."""
    bounds = _cycle_bounds(traj, d)
    if len(bounds) < 2:
        raise ValidationError("hysteresis needs at least two drive periods")
    loops = []
    for k, (a, b) in enumerate(bounds):
        sel = _cycle_slice(traj.times, a, b)
        bz = np.column_stack([drive_value(traj.times[sel], d), traj.z[sel]])
        loops.append(HysteresisLoop(bz, shoelace_area(bz[:, 0], bz[:, 1]), k))
    return loops


def pulse_asymmetry(traj, d):
    """Mirror mismatch of ``Z`` about each period midpoint, normalized by the signal norm."""
    bounds = _cycle_bounds(traj, d)
    out = []
    for a, b in bounds:
        t = traj.times[_cycle_slice(traj.times, a, b)]
        mirrored_t = (a + b) - t
        z = np.interp(t, traj.times, traj.z)
        zm = np.interp(mirrored_t, traj.times, traj.z)
        norm = np.linalg.norm(z)
        out.append(float(np.linalg.norm(z - zm) / norm) if norm > 0 else 0.0)
    return out


def reversal_onsets(traj, d, threshold=0.02):
    """First time after each drive zero at which ``Z`` leaves its value at the zero.

    ``threshold`` is a fraction of the overall ``Z`` range. Zeros after which
    ``Z`` never moves that far within half a period are skipped.
    """
    times, z = traj.times, traj.z
    span = float(z.max() - z.min())
    if span == 0:
        return []
    half = 0.5 * d.period if math.isfinite(d.period) else times[-1] - times[0]
    out = []
    for e in traj.events:
        z0 = float(np.interp(e, times, z))
        sel = np.nonzero((times >= e) & (times <= e + half))[0]
        moved = sel[np.abs(z[sel] - z0) > threshold * span]
        if moved.size:
            out.append((float(e), float(times[moved[0]])))
    return out


def loops_to_csv(loops):
    buf = io.StringIO()
    buf.write("cycle,b,z\n")
    for loop in loops:
        for b, z in loop.points:
            buf.write(f"{loop.cycle_index},{b:.17g},{z:.17g}\n")
    return buf.getvalue()


def stats_to_csv(stats, loops=None, asymmetry=None):
    buf = io.StringIO()
    buf.write("cycle,z_mean,z_min,z_max,n_kinks,area,asymmetry\n")
    for i, s in enumerate(stats):
        area = loops[i].area if loops else math.nan
        asym = asymmetry[i] if asymmetry else math.nan
        buf.write(
            f"{s.cycle_index},{s.z_mean:.17g},{s.z_min:.17g},{s.z_max:.17g},"
            f"{len(s.kink_times)},{area:.17g},{asym:.17g}\n"
        )
    return buf.getvalue()
