"""``lzbloch`` command-line interface.

Exit status: 0 on success, 1 for invalid input or unwritable output, 2 when
the integration fails numerically.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis, lz, spectral
from .config import dissipator_from_file, load_scenario, load_toml, scenario_from_dict, set_dotted
from .dynamics import DriveKind, integrate, read_trajectory_csv
from .errors import DomainError, IntegrationError, ValidationError
from .model import HamiltonianParams, SystemParams, cp_audit, uniaxial
from .presets import get_preset
from .svg import line_chart

THREADS_ENV = "LZ_BLOCH_THREADS"
SUMMARY_FIELDS = ("z_final", "z_mean", "z_min", "z_max", "norm_final", "n_zeros", "n_kinks")


def _write(path, text):
    path = Path(path)
    try:
        if path.parent != Path("."):
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ValidationError(f"cannot write {path}: {exc.strerror}") from None
    return path


def _emit(text, out):
    if out:
        _write(out, text)
    else:
        sys.stdout.write(text)


def parse_range(text, what="range"):
    """``"lo:hi:n"`` -> ``n`` evenly spaced values (``n >= 1``)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"{what} must look like lo:hi:n, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        n = int(parts[2])
    except ValueError:
        raise ValidationError(f"{what} must look like lo:hi:n, got {text!r}") from None
    if n < 1:
        raise ValidationError(f"{what}: n must be >= 1")
    return np.linspace(lo, hi, n)


def summarize(traj):
    """Scalar summary of a trajectory, keyed by :data:`SUMMARY_FIELDS`."""
    t, z = traj.times, traj.z
    mean = float(analysis._trapezoid(z, t) / (t[-1] - t[0]))
    return {
        "z_final": float(z[-1]),
        "z_mean": mean,
        "z_min": float(z.min()),
        "z_max": float(z.max()),
        "norm_final": float(traj.norms[-1]),
        "n_zeros": len(traj.events),
        "n_kinks": len(analysis.kinks(traj)),
    }


def _summary_row(summary):
    return ",".join(
        str(v) if isinstance(v, int) else f"{v:.17g}" for v in (summary[k] for k in SUMMARY_FIELDS)
    )


def summary_csv(summary):
    return ",".join(SUMMARY_FIELDS) + "\n" + _summary_row(summary) + "\n"


def _run(s):
    return integrate(s.system, s.drive, s.initial, s.t_span, s.integrator)


def _periodic(s):
    return s.drive.kind is DriveKind.COSINE and math.isfinite(s.drive.period)


def _plot(traj, kind, title):
    if kind == "loop":
        series = [("", traj.omega0, traj.z)]
        return line_chart(series, title, "omega0 (bias)", "Z", ylim=(-1.05, 1.05))
    if kind == "xyz":
        series = [("X", traj.times, traj.x), ("Y", traj.times, traj.y), ("Z", traj.times, traj.z)]
    else:
        series = [("", traj.times, traj.z)]
    return line_chart(series, title, "t", "components" if kind == "xyz" else "Z", ylim=(-1.05, 1.05))


def write_scenario_outputs(traj, s, out_dir, plot_kind=None):
    """Write every output named in ``s.outputs`` below ``out_dir``; return the paths."""
    out_dir = Path(out_dir)
    written = []
    outputs = s.outputs
    if "trajectory_csv" in outputs:
        written.append(_write(out_dir / outputs["trajectory_csv"], traj.to_csv()))
    if "loop_csv" in outputs or "stats_csv" in outputs:
        if not _periodic(s):
            raise ValidationError("loop_csv/stats_csv need a periodic cosine drive")
        if "loop_csv" in outputs:
            loops = analysis.hysteresis(traj, s.drive)
            written.append(_write(out_dir / outputs["loop_csv"], analysis.loops_to_csv(loops)))
        if "stats_csv" in outputs:
            stats = analysis.cycle_stats(traj, s.drive)
            n = len(stats)
            loops = analysis.hysteresis(traj, s.drive) if n >= 2 else None
            asym = analysis.pulse_asymmetry(traj, s.drive)
            written.append(
                _write(out_dir / outputs["stats_csv"], analysis.stats_to_csv(stats, loops, asym))
            )
    if "spectrum_csv" in outputs:
        spec = spectral.spectrum_of_trajectory(traj, "Z")
        written.append(_write(out_dir / outputs["spectrum_csv"], spec.to_csv()))
    if "summary_csv" in outputs:
        written.append(_write(out_dir / outputs["summary_csv"], summary_csv(summarize(traj))))
    if "svg_plot" in outputs:
        kind = plot_kind or "z"
        written.append(_write(out_dir / outputs["svg_plot"], _plot(traj, kind, s.name)))
    return written


def cmd_simulate(args):
    s = load_scenario(args.scenario)
    traj = _run(s)
    write_scenario_outputs(traj, s, args.out_dir)
    sys.stdout.write(summary_csv(summarize(traj)))
    return 0


def cmd_figure(args):
    preset = get_preset(args.preset)
    s = preset.scenario(args.preset)
    outputs = {
        "trajectory_csv": f"{args.preset}_trajectory.csv",
        "svg_plot": f"{args.preset}.svg",
        "summary_csv": f"{args.preset}_summary.csv",
    }
    if s.t_span[1] - s.t_span[0] >= 2 * s.drive.period * (1 - 1e-12):
        outputs["loop_csv"] = f"{args.preset}_loops.csv"
        outputs["stats_csv"] = f"{args.preset}_stats.csv"
    s = type(s)(s.name, s.system, s.drive, s.initial, s.t_span, s.integrator, outputs)
    traj = _run(s)
    for path in write_scenario_outputs(traj, s, args.out_dir, preset.plot):
        print(path)
    return 0


def cmd_smatrix(args):
    if not args.nu:
        raise ValidationError("smatrix needs at least one --nu value")
    _emit(lz.scattering_table_csv(args.nu), args.out)
    return 0


def cmd_eigen(args):
    if args.preset:
        preset = get_preset(args.preset)
        delta, b0, omega0 = preset.delta, 1.0, preset.omega0
        gamma_r, gamma = preset.gamma_r, preset.gamma
    else:
        delta, b0, omega0 = args.delta, args.b0, args.omega0
        gamma_r, gamma = args.gamma_r, args.gamma
    for name, value in (("delta", delta), ("omega0", omega0)):
        if value is None:
            raise ValidationError(f"eigen needs --{name} (or --preset)")
    h = HamiltonianParams(delta=delta, b0=b0, omega0_freq=omega0)
    p = SystemParams(h, uniaxial(gamma_r, gamma), "homogeneous")
    slope = h.slope
    # the scan runs over the dimensionless sweep coordinate slope * t
    times = parse_range(args.scan, "--scan") / slope
    text = lz.eigen_scan_csv(times, p, slope)
    if args.asymptotic:
        lines = text.splitlines()
        out = [lines[0] + ",re_p1_asym,re_p2_asym,im_p2_asym"]
        for t, line in zip(times, lines[1:]):
            ev = lz.eigenvalues_asymptotic(t, p, slope, form=args.asymptotic)
            out.append(line + f",{ev[0].real:.17g},{ev[1].real:.17g},{ev[1].imag:.17g}")
        text = "\n".join(out) + "\n"
    _emit(text, args.out)
    return 0


def cmd_cp_check(args):
    d = dissipator_from_file(args.params)
    report = cp_audit(d, tol=args.tol)
    _emit(report.to_csv(), args.out)
    if not report.passed:
        failed = ", ".join(e.id for e in report.entries if not e.passed)
        print(f"complete-positivity check failed: {failed}", file=sys.stderr)
        return 1
    return 0


def cmd_spectrum(args):
    times, states, _ = read_trajectory_csv(args.trajectory)
    index = {"X": 0, "Y": 1, "Z": 2}[args.component]
    spec = spectral.spectrum(times, states[:, index], args.window)
    _emit(spec.to_csv(), args.out)
    return 0


def _sweep_point(payload):
    data, base = payload
    s = scenario_from_dict(data, base)
    return summarize(_run(s))


def _worker_count(n):
    limit = os.environ.get(THREADS_ENV)
    workers = os.cpu_count() or 1
    if limit is not None:
        try:
            cap = int(limit)
        except ValueError:
            raise ValidationError(f"{THREADS_ENV} must be a positive integer, got {limit!r}") from None
        if cap < 1:
            raise ValidationError(f"{THREADS_ENV} must be a positive integer, got {limit!r}")
        workers = min(workers, cap)
    return max(1, min(workers, n))


def cmd_sweep(args):
    if "=" not in args.vary:
        raise ValidationError(f"--vary must look like key=lo:hi:n, got {args.vary!r}")
    key, spec = args.vary.split("=", 1)
    values = parse_range(spec, "--vary")
    base = load_toml(args.scenario)
    name = Path(args.scenario).stem
    payloads = []
    for v in values:
        data = set_dotted(base, key, float(v))
        data.pop("outputs", None)
        scenario_from_dict(data, name)  # validate every point before running any
        payloads.append((data, name))
    workers = _worker_count(len(payloads))
    if workers == 1:
        rows = [_sweep_point(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, payloads))
    buf = io.StringIO()
    buf.write(key + "," + ",".join(SUMMARY_FIELDS) + "\n")
    for v, summary in zip(values, rows):
        buf.write(f"{float(v):.17g}," + _summary_row(summary) + "\n")
    _emit(buf.getvalue(), args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lzbloch", description="Driven, dissipative two-level system simulator."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a scenario file")
    p.add_argument("scenario")
    p.add_argument("--out-dir", default=".", help="directory for the scenario outputs")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("figure", help="run a named preset and write CSV + SVG")
    p.add_argument("preset")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("smatrix", help="crossing angles and transfer ratio for given nu")
    p.add_argument("--nu", type=float, nargs="+", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_smatrix)

    p = sub.add_parser("eigen", help="generator eigenvalues along a linear sweep")
    p.add_argument("--scan", required=True, help="lo:hi:n in units of slope*t")
    p.add_argument("--preset")
    p.add_argument("--delta", type=float)
    p.add_argument("--omega0", type=float)
    p.add_argument("--b0", type=float, default=1.0)
    p.add_argument("--gamma-r", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--asymptotic", choices=("printed", "rederived"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("cp-check", help="complete-positivity audit of a rates file")
    p.add_argument("params")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cp_check)

    p = sub.add_parser("spectrum", help="Fourier transform of a trajectory CSV")
    p.add_argument("trajectory")
    p.add_argument("--component", choices=("X", "Y", "Z"), default="Z")
    p.add_argument("--window", choices=("none", "hann"), default="hann")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="vary one scenario key and summarize each run")
    p.add_argument("scenario")
    p.add_argument("--vary", required=True, help="table.key=lo:hi:n")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; usage errors are validation errors here
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IntegrationError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
