"""Frequency content of a single crossing.

Fourier-transform Z(t) from a unitary linear sweep and compare the high-frequency
envelope with the closed-form 1/omega decay.

Run:  python demos/04_spectrum.py   (writes an SVG to demos/out/)
"""

import math
from pathlib import Path

import numpy as np

from lzbloch import BlochState, DriveSpec, HamiltonianParams, IntegratorConfig, SystemParams, integrate
from lzbloch.spectral import fit_population_envelope, spectrum_of_trajectory
from lzbloch.svg import line_chart

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

slope, delta = 0.063, 0.12
t_max = math.ceil(100 * delta / slope)
traj = integrate(
    SystemParams(HamiltonianParams(delta=delta)),
    DriveSpec.linear(slope),
    BlochState.up(),
    (-t_max, t_max),
    IntegratorConfig(sample_dt=0.05),
)
spec = spectrum_of_trajectory(traj, "Z", "hann")
fit = fit_population_envelope(spec, delta, slope, (5 * delta, 20 * delta))
print(f"envelope exponent {fit.exponent:.3f}, fitted scale {fit.scale:.3f}, relative RMS {fit.rel_rms:.3f}")

band = (spec.omega > 2 * delta) & (spec.omega < 25 * delta)
series = [
    ("|Z(omega)|", np.log10(spec.omega[band]), np.log10(spec.magnitude[band])),
    ("fitted envelope", np.log10(fit.omega), np.log10(fit.model)),
]
(out / "spectrum.svg").write_text(line_chart(series, "population spectrum", "log10 omega", "log10 |Z|"))
