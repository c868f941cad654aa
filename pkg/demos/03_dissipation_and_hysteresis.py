"""Dissipation: checking the rates, then watching loops open.

First audit a thermal bath and a deliberately unphysical rate set for complete
positivity. Then compare the (bias, Z) loops of a tuned unitary run, the same
run with decoherence, and a strongly damped run whose relaxation follows the
instantaneous lower level.

Run:  python demos/03_dissipation_and_hysteresis.py   (writes SVGs to demos/out/)
"""

from pathlib import Path

from lzbloch import DissipatorParams, cp_audit, hysteresis, integrate, pulse_asymmetry, thermal_bath
from lzbloch.presets import preset_scenario
from lzbloch.svg import line_chart

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

# %% Positivity audit
print(cp_audit(thermal_bath(0.05, 2.0)).to_csv())
bad = cp_audit(DissipatorParams(gamma1=1.0))
print("gamma1 only -> passed:", bad.passed, " triangle_1 residual:", bad["triangle_1"].residual)

# %% Loops
for name in ("fig5", "fig7", "fig8"):
    s = preset_scenario(name)
    traj = integrate(s.system, s.drive, s.initial, s.t_span)
    loops = hysteresis(traj, s.drive)
    last = loops[-1]
    asym = pulse_asymmetry(traj, s.drive)[-1]
    print(
        f"{name}: last-cycle area {last.area:+.4f}, normalized {last.normalized_area:+.4f}, "
        f"closure gap {last.closure_gap:.2e}, pulse asymmetry {asym:.3f}"
    )
    series = [(f"cycle {lp.cycle_index + 1}", lp.points[:, 0], lp.points[:, 1]) for lp in loops[-3:]]
    (out / f"{name}_loops.svg").write_text(line_chart(series, name, "bias", "Z", ylim=(-1.05, 1.05)))
