"""Bloch-vector dynamics of a driven, dissipative two-level system.

Submodules: ``model`` (parameters, positivity audit), ``dynamics``
(integration), ``lz`` (single-crossing scattering and eigenvalues),
``spectral`` (Fourier analysis), ``analysis`` (kinks, cycles, hysteresis),
``cli`` (command line).
"""

from .analysis import CycleStats, HysteresisLoop, cycle_stats, hysteresis, kinks, pulse_asymmetry
from .dynamics import (
    DriveKind,
    DriveSpec,
    IntegratorConfig,
    Trajectory,
    drive_value,
    find_drive_zeros,
    generator_at,
    integrate,
)
from .errors import (
    DomainError,
    IntegrationError,
    StepSizeUnderflow,
    UnphysicalState,
    ValidationError,
)
from .lz import (
    EigenTriple,
    ScatteringData,
    eigenvalues_asymptotic,
    eigenvalues_exact,
    gamma_c,
    lz_nu,
    s_matrix,
    semiclassical_momentum,
    transfer_ratio,
)
from .model import (
    BlochState,
    CouplingMatrix,
    CpReport,
    DissipatorParams,
    HamiltonianParams,
    RelaxationMode,
    SystemParams,
    cp_audit,
    rates_from_coupling,
    thermal_bath,
    uniaxial,
)
from .spectral import Spectrum, Window, phi_from_state, spectrum, z_tilde_asymptotic, x_tilde_asymptotic

__version__ = "0.1.0"
