"""A single linear level crossing.

Sweep the bias linearly through zero and compare the final population with
the closed-form transfer ratio. Then look at the crossing rotation angles.

Run:  python demos/01_single_crossing.py
"""

import math

import numpy as np

from lzbloch import (
    BlochState,
    DriveSpec,
    HamiltonianParams,
    IntegratorConfig,
    SystemParams,
    integrate,
    s_matrix,
    transfer_ratio,
)

# %% Population transfer across one sweep
# nu = delta^2 / (4 slope) sets how adiabatic the passage is.
print("   nu   numeric   closed form")
for nu in (0.05, 0.25, 1.0):
    delta = 2 * math.sqrt(nu)
    # long windows: the finite-time ringing decays like 1/(slope t)
    edge = 80.0
    traj = integrate(
        SystemParams(HamiltonianParams(delta=delta)),
        DriveSpec.linear(1.0),
        BlochState.up(),
        (-edge, edge),
        IntegratorConfig(sample_dt=0.1),
    )
    # average the last stretch to suppress the residual oscillation
    tail = traj.z[traj.times > edge - 30].mean()
    print(f"{nu:5.2f}  {tail:+.4f}   {transfer_ratio(nu):+.4f}")

# %% Crossing rotation
# cos(theta) = exp(-pi nu); phi is the phase picked up at the crossing.
for nu in (0.0571, 0.25, 2.0):
    sd = s_matrix(nu)
    print(f"nu={nu:6.4f}  theta={sd.theta:.4f} rad  phi={sd.phi:+.4f} rad")
    assert np.allclose(sd.s @ sd.s.conj().T, np.eye(2))
