"""Complex log-Gamma and a closed-form cubic solver."""

import cmath
import math

from .errors import DomainError

# Lanczos approximation, g = 7, nine coefficients
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _log_gamma_lanczos(z):
    # valid for Re z >= 1/2
    z = z - 1
    x = _LANCZOS_COEF[0]
    for i in range(1, 9):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def complex_log_gamma(z):
    """Log-Gamma on the principal branch (cut along the negative real axis).

    Arguments with ``Re z < 1/2`` are shifted upward with the recurrence
    ``log G(z) = log G(z + n) - sum log(z + k)``, which keeps the result
    continuous off the negative real axis. The lower half-plane is obtained
    by conjugation, so a signed zero imaginary part selects the side of the cut.

    Raises
    ------
    DomainError
        At the poles ``z = 0, -1, -2, ...``.
    """
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise DomainError(f"log-Gamma has a pole at z = {z.real:g}")
    if math.copysign(1.0, z.imag) < 0:
        # lower half-plane (including -0.0 on the cut) by conjugate symmetry
        return complex_log_gamma(z.conjugate()).conjugate()
    shift = 0
    while (z + shift).real < 0.5:
        shift += 1
    result = _log_gamma_lanczos(z + shift)
    for k in range(shift):
        result -= cmath.log(z + k)
    return result


def complex_gamma(z):
    return cmath.exp(complex_log_gamma(z))


def _cbrt(x):
    return math.copysign(abs(x) ** (1 / 3), x)


def solve_cubic(a, b, c, d):
    """Roots of ``a p^3 + b p^2 + c p + d = 0`` for real coefficients.

    Three real roots are taken from the trigonometric (Viete) form, a single
    real root plus a conjugate pair from Cardano's formula. Every root gets one
    Newton step on the original polynomial.

    Returns
    -------
    list of complex
        Real roots first (descending), then the conjugate pair with the
        positive imaginary part first.
    """
    if a == 0:
        raise DomainError("leading coefficient must be non-zero")
    b, c, d = b / a, c / a, d / a
    # depressed cubic y^3 + q y + r with p = y - b/3
    shift = -b / 3
    q = c - b * b / 3
    r = 2 * b**3 / 27 - b * c / 3 + d
    disc = (r / 2) ** 2 + (q / 3) ** 3

    if q == 0:
        # y^3 = -r: one real cube root and its two rotations
        y1 = _cbrt(-r)
        re, im = -y1 / 2, math.sqrt(3) / 2 * abs(y1)
        roots = [complex(y1 + shift), complex(re + shift, im), complex(re + shift, -im)]
        if r == 0:
            roots = [complex(shift)] * 3
    elif disc <= 0 and q < 0:
        m = 2 * math.sqrt(-q / 3)
        arg = (3 * r / q) / m
        theta = math.acos(max(-1.0, min(1.0, arg))) / 3
        roots = [complex(m * math.cos(theta - 2 * math.pi * k / 3) + shift) for k in range(3)]
    else:
        s = math.sqrt(max(disc, 0.0))
        u = _cbrt(-r / 2 + s)
        v = _cbrt(-r / 2 - s)
        y1 = u + v
        re = -y1 / 2
        im = math.sqrt(3) / 2 * abs(u - v)
        roots = [complex(y1 + shift), complex(re + shift, im), complex(re + shift, -im)]

    def poly(p):
        return ((p + b) * p + c) * p + d

    def dpoly(p):
        return (3 * p + 2 * b) * p + c

    polished = []
    for p in roots:
        dp = dpoly(p)
        if dp != 0:
            step = poly(p) / dp
            if abs(poly(p - step)) <= abs(poly(p)):
                p = p - step
        if p.imag != 0 and abs(p.imag) < 1e-300:
            p = complex(p.real)
        polished.append(p)

    real = sorted((p for p in polished if p.imag == 0), key=lambda p: -p.real)
    pair = sorted((p for p in polished if p.imag != 0), key=lambda p: -p.imag)
    return real + pair
