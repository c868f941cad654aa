"""Frequency-domain view of the unitary Landau-Zener problem.

With ``phi(t) = X + (slope / delta) t Z`` the population is recovered as
``Z = (delta / slope) dphi/dt``. At large ``|omega|`` the Fourier amplitudes of
``Z`` and ``X`` reduce to two counter-rotating branches with exponents
``(omega / sqrt(slope))^(-+2 i nu)``; those closed forms are evaluated here and
compared with discrete transforms of integrated trajectories. Transforms use
the ``exp(-i omega t)`` convention throughout.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError
from .lz import lz_nu


class Window(str, enum.Enum):
    NONE = "none"
    HANN = "hann"


@dataclass(frozen=True)
class SpectralSample:
    omega: float
    z_tilde: complex
    x_tilde: complex


@dataclass(frozen=True)
class Spectrum:
    """Discrete approximation of ``int exp(-i omega t) s(t) dt`` on ascending ``omega``."""

    omega: np.ndarray
    values: np.ndarray
    dt: float
    window: Window

    @property
    def magnitude(self):
        return np.abs(self.values)

    def to_csv(self):
        buf = io.StringIO()
        buf.write("omega,re,im,abs\n")
        for w, v in zip(self.omega, self.values):
            buf.write(f"{w:.17g},{v.real:.17g},{v.imag:.17g},{abs(v):.17g}\n")
        return buf.getvalue()


def phi_from_state(t, v, delta, slope):
    """``X + (slope / delta) t Z``; ``v`` may be a BlochState or an ``(..., 3)`` array."""
    if delta == 0:
        raise DomainError("phi is undefined for delta = 0")
    if hasattr(v, "as_array"):
        v = v.as_array()
    v = np.asarray(v, dtype=float)
    return v[..., 0] + (slope / delta) * np.asarray(t) * v[..., 2]


def _branches(omega, nu, slope):
    w = np.abs(omega)
    phase = w**2 / (2 * slope) - 2 * nu * np.log(w / math.sqrt(slope))
    return np.exp(1j * phase), np.exp(-1j * phase)


def _check(omega, slope):
    omega = np.asarray(omega, dtype=float)
    if not slope > 0:
        raise ValidationError(f"slope must be positive, got {slope}")
    if np.any(omega == 0):
        raise DomainError("asymptotic forms are singular at omega = 0")
    return omega


def z_tilde_asymptotic(omega, delta, slope):
    """Large-frequency form of the population spectrum, up to a constant factor.

    ``i (delta / (slope w)) exp(-pi nu / 2) [e^{i w^2/2slope} (w/sqrt(slope))^{-2i nu}
    + c.c. branch]`` for ``w > 0``; negative frequencies follow from
    ``Z(-w) = conj(Z(w))``.
    """
    omega = _check(omega, slope)
    nu = lz_nu(delta, slope)
    plus, minus = _branches(omega, nu, slope)
    w = np.abs(omega)
    value = 1j * delta / (slope * w) * math.exp(-math.pi * nu / 2) * (plus + minus)
    value = np.where(omega > 0, value, np.conj(value))
    return value if value.ndim else complex(value)


def x_tilde_asymptotic(omega, delta, slope):
    """Large-frequency form of the coherence spectrum, up to a constant factor."""
    omega = _check(omega, slope)
    nu = lz_nu(delta, slope)
    plus, minus = _branches(omega, nu, slope)
    w = np.abs(omega)
    value = (1 - 2 * (delta / w) ** 2) / slope * math.exp(-math.pi * nu / 2) * (plus - minus)
    value = np.where(omega > 0, value, np.conj(value))
    return value if value.ndim else complex(value)


def z_tilde_envelope(omega, delta, slope):
    """Upper envelope ``2 (delta / (slope |w|)) exp(-pi nu / 2)`` of ``|z_tilde_asymptotic|``.

    Reached where the two branch phases align.
    """
    omega = _check(omega, slope)
    nu = lz_nu(delta, slope)
    return 2 * delta / (slope * np.abs(omega)) * math.exp(-math.pi * nu / 2)


def asymptotic_samples(omegas, delta, slope):
    z = np.atleast_1d(z_tilde_asymptotic(omegas, delta, slope))
    x = np.atleast_1d(x_tilde_asymptotic(omegas, delta, slope))
    return [SpectralSample(float(w), complex(a), complex(b)) for w, a, b in zip(np.atleast_1d(omegas), z, x)]


def spectrum(times, signal, window=Window.HANN):
    """Fourier transform of a uniformly sampled real or complex signal."""
    window = Window(window)
    times = np.asarray(times, dtype=float)
    signal = np.asarray(signal)
    if times.ndim != 1 or len(times) < 2 or len(times) != len(signal):
        raise ValidationError("need matching 1-d time and signal arrays with >= 2 samples")
    steps = np.diff(times)
    dt = steps.mean()
    if np.max(np.abs(steps - dt)) > 1e-9 * max(dt, np.max(np.abs(times))):
        raise ValidationError("spectrum needs uniformly sampled data")
    if window is Window.HANN:
        signal = signal * np.hanning(len(signal))
    n = len(signal)
    omega = 2 * np.pi * np.fft.fftfreq(n, d=dt)
    values = np.fft.fft(signal) * dt * np.exp(-1j * omega * times[0])
    order = np.argsort(omega, kind="stable")
    return Spectrum(omega[order], values[order], float(dt), window)


def spectrum_of_trajectory(traj, component="Z", window=Window.HANN):
    index = {"X": 0, "Y": 1, "Z": 2}.get(str(component).upper())
    if index is None:
        raise ValidationError(f"component must be X, Y or Z, got {component!r}")
    return spectrum(traj.times, traj.states[:, index], window)


def band_envelope(omega, magnitude, band, n_bins=24):
    """Per-bin maxima of ``magnitude`` over log-spaced bins covering ``band``.

    Returns the geometric bin centres and the maxima; empty bins are dropped.
    """
    lo, hi = band
    edges = np.geomspace(lo, hi, n_bins + 1)
    centres, peaks = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        sel = (omega >= a) & (omega < b)
        if np.any(sel):
            centres.append(math.sqrt(a * b))
            peaks.append(float(np.max(magnitude[sel])))
    return np.array(centres), np.array(peaks)


def power_law_exponent(x, y):
    """Least-squares slope of ``log y`` against ``log x``."""
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)


@dataclass(frozen=True)
class OverlayFit:
    omega: np.ndarray
    measured: np.ndarray
    model: np.ndarray
    scale: float
    exponent: float
    rel_rms: float

    def to_csv(self):
        buf = io.StringIO()
        buf.write("omega,measured_abs,model_abs\n")
        for w, m, f in zip(self.omega, self.measured, self.model):
            buf.write(f"{w:.17g},{m:.17g},{f:.17g}\n")
        return buf.getvalue()


def fit_population_envelope(spec, delta, slope, band, n_bins=12):
    """Compare the measured ``|Z(omega)|`` envelope with the asymptotic form.

    The measured envelope is the per-bin maximum of ``|Z(omega)|`` over
    log-spaced bins on the positive frequencies; the model envelope is
    :func:`z_tilde_envelope` at the bin centres. The overall constant of the
    asymptotic form is free, so one real scale factor is fitted by least
    squares before the relative RMS residual is computed.
    """
    pos = spec.omega > 0
    centres, measured = band_envelope(spec.omega[pos], spec.magnitude[pos], band, n_bins)
    model = z_tilde_envelope(centres, delta, slope)
    scale = float(measured @ model / (model @ model))
    fitted = scale * model
    rel_rms = float(np.sqrt(np.mean(((measured - fitted) / fitted) ** 2)))
    return OverlayFit(
        centres, measured, fitted, scale, power_law_exponent(centres, measured), rel_rms
    )
