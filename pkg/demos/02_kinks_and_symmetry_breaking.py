"""Unitary driving: kinks at crossings and a population that keeps its sign.

Two runs differ only in the drive frequency. At 0.063 the population climbs
from -1 to +1 in three crossings; at 0.0682 the rotations at successive
crossings cancel and Z stays negative for all ten cycles.

Run:  python demos/02_kinks_and_symmetry_breaking.py   (writes SVGs to demos/out/)
"""

from pathlib import Path

import numpy as np

from lzbloch import cycle_stats, integrate, kinks
from lzbloch.presets import preset_scenario
from lzbloch.svg import line_chart

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

# %% Three crossings to invert
s = preset_scenario("fig2")
traj = integrate(s.system, s.drive, s.initial, s.t_span)
found = kinks(traj)
t_inv = traj.times[np.argmax(traj.z > 0.9)]
print(f"fig2: {len(traj.events)} crossings, {len(found)} kinks; Z > 0.9 first at t = {t_inv:.1f}")
print("      kinks before that:", [round(k, 1) for k in found if k < t_inv])
(out / "fig2_z.svg").write_text(line_chart([("Z", traj.times, traj.z)], "fig2", "t", "Z"))

# %% Fixed-sign population
s = preset_scenario("fig3")
traj = integrate(s.system, s.drive, s.initial, s.t_span)
means = [c.z_mean for c in cycle_stats(traj, s.drive)]
print(f"fig3: max Z = {traj.z.max():+.3f}; per-cycle means from {min(means):+.3f} to {max(means):+.3f}")
(out / "fig3_z.svg").write_text(line_chart([("Z", traj.times, traj.z)], "fig3", "t", "Z"))
