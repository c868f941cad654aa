"""Time integration of ``dv/dt = M(t) v + C`` for the driven two-level system.

The bias ``omega0(t)`` is either a cosine ``b0 cos(omega0_freq t)`` or a linear
sweep ``slope * t``. Its zeros are known in closed form; the integration is
split at every zero so the stepper never straddles a crossing. This matters for
``sign_following`` relaxation, whose drift ``-gamma3 sign(omega0)`` jumps there.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import _dopri
from .errors import UnphysicalState, ValidationError
from .model import BlochState, RelaxationMode, SystemParams

PHYSICALITY_TOL = 1e-6


class DriveKind(str, enum.Enum):
    COSINE = "cosine"
    LINEAR_SWEEP = "linear_sweep"


@dataclass(frozen=True)
class DriveSpec:
    """Longitudinal bias ``omega0(t)``.

    For ``cosine`` the bias is ``b0 cos(omega0_freq t)``; ``omega0_freq = 0`` is
    a static bias. For ``linear_sweep`` it is ``slope * t`` and ``window`` is the
    natural integration span.
    """

    kind: DriveKind = DriveKind.COSINE
    b0: float = 1.0
    omega0_freq: float = 0.0
    slope: float = 0.0
    window: tuple = (0.0, 0.0)

    def __post_init__(self):
        try:
            kind = DriveKind(self.kind)
        except ValueError:
            raise ValidationError(f"unknown drive kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "window", tuple(float(w) for w in self.window))
        if kind is DriveKind.COSINE:
            if self.omega0_freq < 0:
                raise ValidationError("cosine drive needs omega0 >= 0")
        elif self.slope == 0:
            raise ValidationError("linear_sweep drive needs a non-zero slope")

    @classmethod
    def cosine(cls, b0, omega0_freq):
        return cls(DriveKind.COSINE, b0=float(b0), omega0_freq=float(omega0_freq))

    @classmethod
    def linear(cls, slope, window=(0.0, 0.0)):
        return cls(DriveKind.LINEAR_SWEEP, slope=float(slope), window=window)

    @classmethod
    def from_hamiltonian(cls, h):
        return cls.cosine(h.b0, h.omega0_freq)

    @property
    def period(self):
        """Drive period, ``inf`` for a static or linear drive."""
        if self.kind is DriveKind.COSINE and self.omega0_freq > 0:
            return 2 * math.pi / self.omega0_freq
        return math.inf

    @property
    def amplitude(self):
        return self.b0 if self.kind is DriveKind.COSINE else math.nan


def drive_value(t, d):
    """Bias ``omega0`` at time(s) ``t``."""
    if d.kind is DriveKind.COSINE:
        return d.b0 * np.cos(d.omega0_freq * np.asarray(t, dtype=float))
    return d.slope * np.asarray(t, dtype=float)


def find_drive_zeros(d, t_span):
    """Zeros of ``omega0(t)`` inside the closed interval ``t_span``.

    Cosine zeros are ``(k + 1/2) pi / omega0_freq``; a linear sweep vanishes at
    ``t = 0`` only.
    """
    t0, t1 = sorted(float(t) for t in t_span)
    if d.kind is DriveKind.LINEAR_SWEEP:
        return [0.0] if t0 <= 0.0 <= t1 else []
    if d.omega0_freq == 0 or d.b0 == 0:
        return []
    w = d.omega0_freq
    k_lo = math.ceil(t0 * w / math.pi - 0.5)
    k_hi = math.floor(t1 * w / math.pi - 0.5)
    zeros = [(k + 0.5) * math.pi / w for k in range(k_lo, k_hi + 1)]
    return [z for z in zeros if t0 <= z <= t1]


def _sign_at(t, d, zeros):
    if any(t == z for z in zeros):
        return 0.0
    return float(np.sign(drive_value(t, d)))


def generator_at(t, p, d, sign=None):
    """Generator ``M`` and drift ``C`` at time ``t``.

    Parameters
    ----------
    sign : float, optional
        Override for ``sign(omega0)`` in ``sign_following`` mode. By default the
        sign is evaluated at ``t`` and is 0 exactly at a drive zero.
    """
    h, g = p.hamiltonian, p.dissipator
    w = drive_value(t, d)
    m = np.array(
        [
            [-g.gamma1, g.alpha - w, g.beta + h.delta_prime],
            [g.alpha + w, -g.gamma2, g.gamma_sym - h.delta],
            [g.beta - h.delta_prime, g.gamma_sym + h.delta, -g.gamma3],
        ]
    )
    if p.relaxation_mode is RelaxationMode.SIGN_FOLLOWING:
        if sign is None:
            sign = _sign_at(t, d, find_drive_zeros(d, (t, t)))
        c = np.array([g.c1, g.c2, -g.gamma3 * sign])
    else:
        c = g.drift()
    return m, c


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and step limits.

    ``dt_max`` and ``sample_dt`` default (``None``) to drive period / 200 and
    period / 1000; for non-periodic drives the span replaces the period.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    dt_max: float | None = None
    dt_init: float | None = None
    sample_dt: float | None = None

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValidationError("rtol and atol must be positive")
        for name in ("dt_max", "dt_init", "sample_dt"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValidationError(f"{name} must be positive")
        if self.dt_init is not None and self.dt_max is not None and self.dt_init > self.dt_max:
            raise ValidationError("dt_init must not exceed dt_max")

    def resolved(self, d, t_span):
        """Copy with every ``None`` replaced by its drive-dependent default."""
        span = abs(t_span[1] - t_span[0])
        ref = d.period if math.isfinite(d.period) else span
        dt_max = self.dt_max if self.dt_max is not None else ref / 200
        sample_dt = self.sample_dt if self.sample_dt is not None else ref / 1000
        dt_init = self.dt_init if self.dt_init is not None else min(dt_max, 1e-2)
        return IntegratorConfig(self.rtol, self.atol, dt_max, dt_init, sample_dt)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled solution ``v(t)`` plus the drive zeros crossed."""

    times: np.ndarray
    states: np.ndarray
    events: tuple
    params: SystemParams
    drive: DriveSpec
    stats: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for arr in (self.times, self.states):
            arr.setflags(write=False)

    def __len__(self):
        return len(self.times)

    @property
    def x(self):
        return self.states[:, 0]

    @property
    def y(self):
        return self.states[:, 1]

    @property
    def z(self):
        return self.states[:, 2]

    @property
    def omega0(self):
        return drive_value(self.times, self.drive)

    @property
    def norms(self):
        return np.linalg.norm(self.states, axis=1)

    def state(self, i):
        return BlochState.from_vector(self.states[i])

    @property
    def final(self):
        return self.state(-1)

    def to_csv(self):
        buf = io.StringIO()
        buf.write("t,x,y,z,omega0\n")
        for t, (x, y, z), w in zip(self.times, self.states, self.omega0):
            buf.write(f"{t:.17g},{x:.17g},{y:.17g},{z:.17g},{w:.17g}\n")
        return buf.getvalue()

    def events_to_csv(self):
        return "t_zero\n" + "".join(f"{e:.17g}\n" for e in self.events)


def read_trajectory_csv(path):
    """Load ``(times, states, omega0)`` from a trajectory CSV."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if header != ["t", "x", "y", "z", "omega0"]:
            raise ValidationError(f"{path}: unexpected trajectory header {header}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return data[:, 0], data[:, 1:4], data[:, 4]


def sample_times(t0, t1, dt):
    n = int(math.floor((t1 - t0) / dt + 1e-9))
    times = t0 + dt * np.arange(n + 1)
    if t1 - times[-1] > 1e-9 * dt:
        times = np.append(times, t1)
    else:
        times[-1] = min(times[-1], t1)
    return times


def integrate(p, d, v0, t_span, cfg=None):
    """Integrate the Bloch equation over ``t_span``.

    Parameters
    ----------
    p : SystemParams
    d : DriveSpec
    v0 : BlochState or array_like
    t_span : (float, float)
    cfg : IntegratorConfig, optional

    Returns
    -------
    Trajectory
        Samples on the grid ``t0 + k * sample_dt`` (plus ``t1``); ``events``
        lists the drive zeros in ``[t0, t1]``.

    Raises
    ------
    StepSizeUnderflow
        If the step size collapses.
    UnphysicalState
        If ``|v|`` exceeds ``1 + 1e-6`` at any sample.
    """
    t0, t1 = (float(t) for t in t_span)
    if not t1 > t0:
        raise ValidationError(f"empty time span {t_span!r}")
    v0 = v0 if isinstance(v0, BlochState) else BlochState.from_vector(v0)
    if not v0.is_physical(PHYSICALITY_TOL):
        raise ValidationError(f"initial state {v0} lies outside the Bloch ball")
    if (
        p.relaxation_mode is RelaxationMode.SIGN_FOLLOWING
        and d.kind is DriveKind.COSINE
        and (d.b0 == 0)
    ):
        raise ValidationError("sign_following relaxation needs a non-vanishing bias")

    cfg = (cfg or IntegratorConfig()).resolved(d, (t0, t1))
    zeros = find_drive_zeros(d, (t0, t1))
    edges = [t0] + [z for z in zeros if t0 < z < t1] + [t1]
    times = sample_times(t0, t1, cfg.sample_dt)

    h, g = p.hamiltonian, p.dissipator
    m0 = np.array(
        [
            [-g.gamma1, g.alpha, g.beta + h.delta_prime],
            [g.alpha, -g.gamma2, g.gamma_sym - h.delta],
            [g.beta - h.delta_prime, g.gamma_sym + h.delta, -g.gamma3],
        ]
    )
    sign_following = p.relaxation_mode is RelaxationMode.SIGN_FOLLOWING
    cosine = d.kind is DriveKind.COSINE
    b0, wf, slope = d.b0, d.omega0_freq, d.slope

    states = np.empty((len(times), 3))
    states[0] = v0.as_array()
    y = v0.as_array()
    stepper = _dopri.StepperState(cfg.dt_init)
    for a, b in zip(edges[:-1], edges[1:]):
        c = g.drift()
        if sign_following:
            c = np.array([g.c1, g.c2, -g.gamma3 * _sign_at(0.5 * (a + b), d, zeros)])

        def rhs(t, v, c=c):
            w = b0 * math.cos(wf * t) if cosine else slope * t
            out = m0 @ v + c
            out[0] -= w * v[1]
            out[1] += w * v[0]
            return out

        lo = np.searchsorted(times, a, side="right")
        hi = np.searchsorted(times, b, side="right")
        y, states[lo:hi] = _dopri.integrate_segment(
            rhs, a, b, y, cfg.rtol, cfg.atol, cfg.dt_max, stepper, times[lo:hi]
        )

    norms = np.linalg.norm(states, axis=1)
    bad = np.nonzero(norms > 1.0 + PHYSICALITY_TOL)[0]
    if bad.size:
        i = bad[0]
        raise UnphysicalState(
            f"|v| = {norms[i]:.9g} exceeds 1 at t = {times[i]:.9g}",
            float(times[i - 1]) if i > 0 else t0,
        )
    return Trajectory(
        times=times,
        states=states,
        events=tuple(zeros),
        params=p,
        drive=d,
        stats={"n_accepted": stepper.n_accepted, "n_rejected": stepper.n_rejected},
    )
