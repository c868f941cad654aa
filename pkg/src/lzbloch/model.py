"""Parameter types for the two-level master equation.

The density matrix is written as ``rho = (1 + X s1 + Y s2 + Z s3) / 2`` and the
master equation becomes ``dv/dt = M(t) v + C`` for ``v = (X, Y, Z)``. The
environment enters through a Hermitian 3x3 coupling matrix ``A``; the nine real
numbers that actually appear in ``M`` and ``C`` are collected in
:class:`DissipatorParams`.

Sign convention
---------------
All ``gamma_i`` are stored as non-negative damping rates, i.e. they appear as
``+gamma_i`` on the left-hand side of ``dX/dt + gamma_1 X = ...``. Thermal-bath
formulas quoted elsewhere with explicit minus signs must be translated.

Units: hbar = 1, every rate is an inverse time.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

HERMITIAN_TOL = 1e-12
CP_TOL = 1e-10


class RelaxationMode(str, enum.Enum):
    """How the longitudinal drift ``C_3`` is formed.

    ``none`` and ``homogeneous`` both use the stored drift ``(c1, c2, c3)``;
    ``none`` is the label used for Hamiltonian-only presets. ``sign_following``
    replaces ``c3`` by ``-gamma3 * sign(omega0(t))`` so that ``Z`` relaxes
    toward the instantaneous lower level.
    """

    NONE = "none"
    HOMOGENEOUS = "homogeneous"
    SIGN_FOLLOWING = "sign_following"


@dataclass(frozen=True)
class CouplingMatrix:
    """Hermitian environment-coupling matrix ``A`` (rates, hbar = 1)."""

    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        if a.shape != (3, 3):
            raise ValidationError(f"coupling matrix must be 3x3, got shape {a.shape}")
        for i in range(3):
            for j in range(i, 3):
                if abs(a[i, j] - np.conj(a[j, i])) > HERMITIAN_TOL:
                    raise ValidationError(
                        f"coupling matrix is not Hermitian: a[{i + 1}{j + 1}]={a[i, j]!r} "
                        f"vs conj(a[{j + 1}{i + 1}])={np.conj(a[j, i])!r}"
                    )
        a.setflags(write=False)
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class DissipatorParams:
    """Damping rates, symmetric off-diagonal rates and drift of the Bloch equation."""

    gamma1: float = 0.0
    gamma2: float = 0.0
    gamma3: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    gamma_sym: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            if isinstance(value, complex) or np.iscomplexobj(value):
                raise ValidationError(f"{name} must be real, got {value!r}")
            value = float(value)
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def is_uniaxial(self):
        """True when ``gamma1 == gamma2`` and all off-diagonal rates vanish."""
        return (
            self.gamma1 == self.gamma2
            and self.alpha == 0.0
            and self.beta == 0.0
            and self.gamma_sym == 0.0
        )

    def damping_matrix(self):
        """Symmetric part ``D`` of the generator (without the Hamiltonian)."""
        return np.array(
            [
                [-self.gamma1, self.alpha, self.beta],
                [self.alpha, -self.gamma2, self.gamma_sym],
                [self.beta, self.gamma_sym, -self.gamma3],
            ]
        )

    def drift(self):
        return np.array([self.c1, self.c2, self.c3])


def uniaxial(gamma_r, gamma):
    """Dissipator with transverse rate ``gamma_r`` and longitudinal rate ``gamma``."""
    return DissipatorParams(gamma1=gamma_r, gamma2=gamma_r, gamma3=gamma)


@dataclass(frozen=True)
class HamiltonianParams:
    """``H = (delta s1 + delta_prime s2 + omega0(t) s3) / 2`` with ``omega0 = b0 cos(omega0_freq t)``."""

    delta: float = 0.0
    delta_prime: float = 0.0
    b0: float = 1.0
    omega0_freq: float = 0.0

    def __post_init__(self):
        for name in ("delta", "delta_prime", "b0", "omega0_freq"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.b0 < 0:
            raise ValidationError(f"b0 must be >= 0, got {self.b0}")
        if self.omega0_freq < 0:
            raise ValidationError(f"omega0 must be >= 0, got {self.omega0_freq}")

    @property
    def slope(self):
        """Sweep rate ``b0 * omega0_freq`` of the bias near a zero crossing."""
        return self.b0 * self.omega0_freq


@dataclass(frozen=True)
class SystemParams:
    hamiltonian: HamiltonianParams = field(default_factory=HamiltonianParams)
    dissipator: DissipatorParams = field(default_factory=DissipatorParams)
    relaxation_mode: RelaxationMode = RelaxationMode.NONE

    def __post_init__(self):
        try:
            mode = RelaxationMode(self.relaxation_mode)
        except ValueError:
            choices = ", ".join(m.value for m in RelaxationMode)
            raise ValidationError(
                f"unknown relaxation_mode {self.relaxation_mode!r} (expected one of {choices})"
            ) from None
        object.__setattr__(self, "relaxation_mode", mode)
        if mode is RelaxationMode.SIGN_FOLLOWING and self.dissipator.gamma3 < 0:
            raise ValidationError("sign_following relaxation requires gamma3 >= 0")


@dataclass(frozen=True)
class BlochState:
    x: float
    y: float
    z: float

    @classmethod
    def from_vector(cls, v):
        x, y, z = (float(c) for c in v)
        return cls(x, y, z)

    @classmethod
    def up(cls):
        """Fully magnetized ``Z = +1``."""
        return cls(0.0, 0.0, 1.0)

    @classmethod
    def down(cls):
        """Fully magnetized ``Z = -1``."""
        return cls(0.0, 0.0, -1.0)

    def as_array(self):
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self):
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))

    def is_physical(self, tol=1e-6):
        return self.norm <= 1.0 + tol


def rates_from_coupling(a):
    """Map a Hermitian coupling matrix onto Bloch-equation rates and drift.

    Parameters
    ----------
    a : CouplingMatrix or array_like
        3x3 Hermitian matrix (1-based ``a_ij`` below correspond to ``a[i-1, j-1]``).

    Returns
    -------
    DissipatorParams
        ``gamma1 = 2(a22 + a33)``, ``alpha = a12 + a21``,
        ``c1 = 2i(a23 - a32)`` and cyclic permutations.
    """
    if not isinstance(a, CouplingMatrix):
        a = CouplingMatrix(a)
    m = a.a
    values = dict(
        gamma1=2 * (m[1, 1] + m[2, 2]),
        gamma2=2 * (m[2, 2] + m[0, 0]),
        gamma3=2 * (m[0, 0] + m[1, 1]),
        alpha=m[0, 1] + m[1, 0],
        beta=m[0, 2] + m[2, 0],
        gamma_sym=m[1, 2] + m[2, 1],
        c1=2j * (m[1, 2] - m[2, 1]),
        c2=2j * (m[2, 0] - m[0, 2]),
        c3=2j * (m[0, 1] - m[1, 0]),
    )
    # Hermiticity makes every combination real up to rounding.
    return DissipatorParams(**{k: float(np.real(v)) for k, v in values.items()})


def thermal_bath(g, n_bar):
    """Isotropic thermal bath with coupling ``g`` and mean occupation ``n_bar``."""
    if g < 0:
        raise ValidationError(f"thermal bath coupling g must be >= 0, got {g}")
    if n_bar < 0:
        raise ValidationError(f"mean occupation n_bar must be >= 0, got {n_bar}")
    return DissipatorParams(
        gamma1=g * (n_bar + 0.5),
        gamma2=g * (n_bar + 0.5),
        gamma3=g * (2 * n_bar + 1),
        c3=-g,
    )


@dataclass(frozen=True)
class CpEntry:
    id: str
    residual: float
    passed: bool


@dataclass(frozen=True)
class CpReport:
    entries: tuple

    @property
    def passed(self):
        return all(e.passed for e in self.entries)

    def __getitem__(self, key):
        for e in self.entries:
            if e.id == key:
                return e
        raise KeyError(key)

    def to_csv(self):
        buf = io.StringIO()
        buf.write("inequality,residual,pass\n")
        for e in self.entries:
            buf.write(f"{e.id},{e.residual:.17g},{str(e.passed).lower()}\n")
        return buf.getvalue()


def cp_audit(d, tol=CP_TOL):
    """Check the complete-positivity inequalities for a set of dissipator rates.

    Each residual is the satisfied margin of one inequality (negative means
    violated). ``mixed_printed`` is the cubic inequality in its published form;
    ``determinant`` is ``16 det A >= 0`` written in the same variables, which
    differs from the published form by the sign of ``(gamma2 - gamma1)**2``
    inside the bracket. A residual counts as satisfied when it is above
    ``-tol * scale**degree`` where ``scale`` is the largest rate magnitude.
    """
    g1, g2, g3 = d.gamma1, d.gamma2, d.gamma3
    al, be, ga = d.alpha, d.beta, d.gamma_sym
    c1, c2, c3 = d.c1, d.c2, d.c3

    s1 = ga**2 + c1**2 / 4
    s2 = be**2 + c2**2 / 4
    s3 = al**2 + c3**2 / 4
    cross = 4 * be * (al * ga - c3 * c1 / 4) - 2 * c2 * (al * c1 / 2 + ga * c3 / 2)

    residuals = [
        ("triangle_1", min(g1, g2 + g3 - g1), 1),
        ("triangle_2", min(g2, g3 + g1 - g2), 1),
        ("triangle_3", min(g3, g1 + g2 - g3), 1),
        ("quadratic_1", g1**2 - (g2 - g3) ** 2 - 4 * s1, 2),
        ("quadratic_2", g2**2 - (g3 - g1) ** 2 - 4 * s2, 2),
        ("quadratic_3", g3**2 - (g1 - g2) ** 2 - 4 * s3, 2),
        (
            "mixed_printed",
            cross
            - (g1 + g3 - g2) * s2
            - (g2 + g1 - g3) * (s3 - g3**2 / 4 - (g2 - g1) ** 2 / 4)
            - (g3 + g2 - g1) * s1,
            3,
        ),
        (
            "determinant",
            cross
            - (g1 + g3 - g2) * s2
            - (g2 + g1 - g3) * (s3 - g3**2 / 4 + (g2 - g1) ** 2 / 4)
            - (g3 + g2 - g1) * s1,
            3,
        ),
    ]
    scale = max(1.0, *(abs(v) for v in (g1, g2, g3, al, be, ga, c1, c2, c3)))
    entries = tuple(
        CpEntry(name, float(r), bool(r >= -tol * scale**deg)) for name, r, deg in residuals
    )
    return CpReport(entries)
