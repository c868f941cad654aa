"""Named parameter sets for the standard figures (all with ``b0 = 1``).

``plot`` selects what the ``figure`` subcommand draws: ``z`` is ``Z(t)``,
``xyz`` all three components against time, ``loop`` the ``(omega0, Z)`` curve.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import Scenario
from .dynamics import DriveSpec
from .errors import ValidationError
from .model import BlochState, HamiltonianParams, SystemParams, uniaxial

DEFAULT_CYCLES = 10


@dataclass(frozen=True)
class Preset:
    delta: float
    omega0: float
    gamma_r: float
    gamma: float
    mode: str
    initial: tuple
    plot: str
    cycles: float = DEFAULT_CYCLES

    def scenario(self, name):
        h = HamiltonianParams(delta=self.delta, b0=1.0, omega0_freq=self.omega0)
        p = SystemParams(h, uniaxial(self.gamma_r, self.gamma), self.mode)
        d = DriveSpec.from_hamiltonian(h)
        return Scenario(
            name, p, d, BlochState.from_vector(self.initial), (0.0, self.cycles * d.period)
        )


_UP = (0.0, 0.0, 1.0)
_DOWN = (0.0, 0.0, -1.0)

PRESETS = {
    "fig1": Preset(0.01, 0.02, 0.0, 0.0, "none", _UP, "xyz", cycles=2),
    "fig2": Preset(0.12, 0.063, 0.0, 0.0, "none", _DOWN, "z"),
    "fig3": Preset(0.12, 0.0682, 0.0, 0.0, "none", _DOWN, "z"),
    "fig4": Preset(0.12, 0.0682, 0.0, 0.0, "none", _DOWN, "xyz"),
    "fig5": Preset(0.12, 0.0682, 0.0, 0.0, "none", _DOWN, "loop"),
    "fig6": Preset(0.3, 0.033, 0.01, 0.0, "homogeneous", _UP, "loop"),
    "fig7": Preset(0.12, 0.0682, 0.01, 0.0, "homogeneous", _DOWN, "z"),
    "fig8": Preset(0.05, 0.02, 0.035, 0.07, "sign_following", _UP, "loop"),
    "fig9": Preset(0.05, 0.02, 0.035, 0.07, "sign_following", _UP, "z"),
    "fig10": Preset(0.05, 0.02, 0.01, 0.02, "sign_following", _UP, "loop"),
    "fig11": Preset(0.12, 0.0682, 0.01, 0.02, "sign_following", _DOWN, "z"),
    "fig12": Preset(0.12, 0.0682, 0.01, 0.02, "sign_following", _DOWN, "loop"),
}


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(PRESETS)
        raise ValidationError(f"unknown preset {name!r} (known: {known})") from None


def preset_scenario(name):
    return get_preset(name).scenario(name)
