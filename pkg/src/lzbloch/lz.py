"""Landau-Zener crossing: scattering data and generator eigenvalues.

Near a zero of the bias the level spacing is linear, ``omega0 = slope * t``,
and a single crossing is characterized by the adiabaticity parameter
``nu = delta**2 / (4 slope)``.
"""

from __future__ import annotations

import cmath
import io
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DriveSpec, generator_at
from .errors import DomainError, ValidationError
from .special import complex_log_gamma, solve_cubic


@dataclass(frozen=True)
class ScatteringData:
    """Crossing rotation ``S = [[cos th, i sin th e^{i phi}], [i sin th e^{-i phi}, cos th]]``."""

    nu: float
    theta: float
    phi: float
    s: np.ndarray

    @property
    def transfer_ratio(self):
        return transfer_ratio(self.nu)


@dataclass(frozen=True)
class EigenTriple:
    """Eigenvalues ``(p1, p2, p3)`` of the instantaneous generator.

    ``p1`` is the longitudinal (population) branch, ``p2``/``p3`` the
    precessing pair with ``Im p2 >= Im p3``.
    """

    p: tuple

    def __iter__(self):
        return iter(self.p)

    def __getitem__(self, i):
        return self.p[i]

    @property
    def total(self):
        return sum(self.p)


def lz_nu(delta, slope):
    if not slope > 0:
        raise ValidationError(f"sweep slope must be positive, got {slope}")
    return delta**2 / (4 * slope)


def semiclassical_momentum(t, delta, slope):
    """Large-``t`` WKB momentum ``slope t / 2 + nu / t`` of the spinor amplitude."""
    if t == 0:
        raise DomainError("semiclassical momentum is singular at t = 0")
    return slope * t / 2 + lz_nu(delta, slope) / t


def transfer_ratio(nu):
    """Population ratio ``Z(+inf) / Z(-inf)`` across one linear sweep."""
    if nu < 0:
        raise DomainError(f"nu must be >= 0, got {nu}")
    return 2 * math.exp(-2 * math.pi * nu) - 1


def s_matrix(nu):
    """Crossing S-matrix from the closed-form Weber-function connection.

    ``S11 = exp(-pi nu)`` and
    ``S12 = sqrt(2 pi / nu) exp(-pi nu / 2 - i pi / 4) / Gamma(i nu)``.
    ``nu = 0`` returns the identity.
    """
    if nu < 0:
        raise DomainError(f"nu must be >= 0, got {nu}")
    if nu == 0:
        return ScatteringData(0.0, 0.0, 0.0, np.eye(2, dtype=complex))
    s11 = math.exp(-math.pi * nu)
    log_s12 = (
        0.5 * math.log(2 * math.pi / nu)
        - math.pi * nu / 2
        - 1j * math.pi / 4
        - complex_log_gamma(1j * nu)
    )
    s12 = cmath.exp(log_s12)
    theta = math.acos(s11)
    phi = cmath.phase(s12) - math.pi / 2
    phi = math.remainder(phi, 2 * math.pi)
    if phi == -math.pi:
        phi = math.pi
    s21 = 1j * math.sin(theta) * cmath.exp(-1j * phi)
    s = np.array([[s11, s12], [s21, s11]], dtype=complex)
    return ScatteringData(nu, theta, phi, s)


def _require_uniaxial(p):
    if not p.dissipator.is_uniaxial:
        raise ValidationError(
            "eigenvalue formulas need uniaxial dissipation (gamma1 == gamma2, no off-diagonal rates)"
        )


def gamma_c(p):
    """Return ``(delta_shift, gamma_c)`` with ``delta_shift = (gamma - gamma_r) / 3``.

    ``gamma_c = delta_shift * (delta_shift**2 - Delta**2 / 2)``.
    """
    _require_uniaxial(p)
    shift = (p.dissipator.gamma3 - p.dissipator.gamma1) / 3
    delta = p.hamiltonian.delta
    return shift, shift * (shift**2 - delta**2 / 2)


def eigenvalues_exact(t, p, slope):
    """Eigenvalues of the generator with the bias linearized to ``slope * t``."""
    _require_uniaxial(p)
    m, _ = generator_at(t, p, DriveSpec.linear(slope))
    tr = np.trace(m)
    minors = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    det = np.linalg.det(m)
    roots = solve_cubic(1.0, -tr, minors, -det)
    if roots[-1].imag == 0:
        # three real roots: the longitudinal branch is the one nearest -gamma3
        target = -p.dissipator.gamma3
        first = min(roots, key=lambda r: abs(r.real - target))
        rest = sorted((r for r in roots if r is not first), key=lambda r: -r.real)
        roots = [first] + rest
    return EigenTriple(tuple(roots))


def eigenvalues_asymptotic(t, p, slope, form="printed"):
    """Large-``t`` expansion of the generator eigenvalues to ``O(1/t^2)``.

    Parameters
    ----------
    form : {"printed", "rederived"}
        ``"printed"`` uses ``p1 = -gamma - 2 gamma_c / (slope t)^2`` and
        ``Re p2,3 = -gamma_r + gamma_c / (slope t)^2``. ``"rederived"``
        replaces ``-2 gamma_c`` by ``3 delta_shift Delta^2``, the coefficient
        obtained by expanding the characteristic polynomial directly. Both
        share the imaginary part ``slope t + 2 nu / t``.
    """
    if t == 0:
        raise DomainError("asymptotic eigenvalues are singular at t = 0")
    shift, gc = gamma_c(p)
    delta = p.hamiltonian.delta
    w2 = (slope * t) ** 2
    if form == "printed":
        corr = -2 * gc / w2
    elif form == "rederived":
        corr = 3 * shift * delta**2 / w2
    else:
        raise ValidationError(f"unknown expansion form {form!r}")
    gamma_r, gamma = p.dissipator.gamma1, p.dissipator.gamma3
    im = abs(slope * t + 2 * lz_nu(delta, slope) / t)
    p1 = complex(-gamma + corr)
    return EigenTriple((p1, complex(-gamma_r - corr / 2, im), complex(-gamma_r - corr / 2, -im)))


def scattering_table_csv(nus):
    buf = io.StringIO()
    buf.write("nu,theta,phi,T\n")
    for nu in nus:
        sd = s_matrix(nu)
        buf.write(f"{nu:.17g},{sd.theta:.17g},{sd.phi:.17g},{transfer_ratio(nu):.17g}\n")
    return buf.getvalue()


def eigen_scan_csv(times, p, slope):
    buf = io.StringIO()
    buf.write("t,re_p1,im_p1,re_p2,im_p2,re_p3,im_p3\n")
    for t in times:
        ev = eigenvalues_exact(t, p, slope)
        cols = [f"{t:.17g}"] + [f"{v:.17g}" for r in ev for v in (r.real, r.imag)]
        buf.write(",".join(cols) + "\n")
    return buf.getvalue()
