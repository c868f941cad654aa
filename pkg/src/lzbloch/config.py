"""Scenario and parameter files (TOML).

A scenario file looks like::

    name = "fig2"
    initial = [0.0, 0.0, -1.0]
    cycles = 10                      # or: t_span = [0.0, 997.3]

    [system]
    delta = 0.12
    relaxation_mode = "none"         # none | homogeneous | sign_following
    gamma_r = 0.0                    # uniaxial shorthand, or gamma1..c3
    gamma = 0.0

    [drive]
    kind = "cosine"                  # cosine | linear_sweep
    b0 = 1.0
    omega0 = 0.063                   # or slope = ... for linear_sweep

    [integrator]
    rtol = 1e-10

    [outputs]
    trajectory_csv = "fig2.csv"
    svg_plot = "fig2.svg"

Unknown keys anywhere are rejected.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from .dynamics import DriveKind, DriveSpec, IntegratorConfig
from .errors import ValidationError
from .model import (
    BlochState,
    DissipatorParams,
    HamiltonianParams,
    SystemParams,
    thermal_bath,
    uniaxial,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

OUTPUT_KEYS = ("trajectory_csv", "loop_csv", "stats_csv", "spectrum_csv", "summary_csv", "svg_plot")
RATE_KEYS = tuple(DissipatorParams.__dataclass_fields__)
SYSTEM_KEYS = ("delta", "delta_prime", "relaxation_mode", "gamma_r", "gamma") + RATE_KEYS
DRIVE_KEYS = ("kind", "b0", "omega0", "slope")
INTEGRATOR_KEYS = ("rtol", "atol", "dt_max", "dt_init", "sample_dt")
TOP_KEYS = ("name", "initial", "t_span", "cycles", "system", "drive", "integrator", "outputs")


@dataclass(frozen=True)
class Scenario:
    name: str
    system: SystemParams
    drive: DriveSpec
    initial: BlochState
    t_span: tuple
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    outputs: dict = field(default_factory=dict)

    def __post_init__(self):
        paths = [str(p) for p in self.outputs.values()]
        if len(set(paths)) != len(paths):
            raise ValidationError(f"scenario {self.name!r}: output paths must be distinct")


def _reject_unknown(table, allowed, where):
    extra = sorted(set(table) - set(allowed))
    if extra:
        raise ValidationError(f"unknown key(s) in {where}: {', '.join(extra)}")


def _number(table, key, where, default=None):
    value = table.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where}.{key} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ValidationError(f"{where}.{key} must be finite")
    return float(value)


def _dissipator(table, where):
    shorthand = {"gamma_r", "gamma"} & set(table)
    explicit = set(RATE_KEYS) & set(table)
    if shorthand and explicit:
        raise ValidationError(
            f"{where}: use either gamma_r/gamma or the explicit rates, not both"
        )
    if shorthand:
        return uniaxial(_number(table, "gamma_r", where, 0.0), _number(table, "gamma", where, 0.0))
    return DissipatorParams(**{k: _number(table, k, where) for k in explicit})


def scenario_from_dict(data, base_name="scenario"):
    """Build a :class:`Scenario` from parsed TOML (or an equivalent dict)."""
    _reject_unknown(data, TOP_KEYS, "scenario")
    system = dict(data.get("system", {}))
    drive = dict(data.get("drive", {}))
    integ = dict(data.get("integrator", {}))
    outputs = dict(data.get("outputs", {}))
    _reject_unknown(system, SYSTEM_KEYS, "[system]")
    _reject_unknown(drive, DRIVE_KEYS, "[drive]")
    _reject_unknown(integ, INTEGRATOR_KEYS, "[integrator]")
    _reject_unknown(outputs, OUTPUT_KEYS, "[outputs]")

    kind = drive.get("kind", "cosine")
    try:
        kind = DriveKind(kind)
    except ValueError:
        raise ValidationError(f"[drive].kind must be cosine or linear_sweep, got {kind!r}") from None
    b0 = _number(drive, "b0", "drive", 1.0)
    if kind is DriveKind.COSINE:
        if "slope" in drive:
            raise ValidationError("[drive].slope only applies to linear_sweep")
        omega0 = _number(drive, "omega0", "drive", 0.0)
        d = DriveSpec.cosine(b0, omega0)
    else:
        if "omega0" in drive:
            raise ValidationError("[drive].omega0 only applies to cosine drives")
        slope = _number(drive, "slope", "drive")
        if slope is None:
            raise ValidationError("[drive].slope is required for linear_sweep")
        omega0 = 0.0
        d = DriveSpec.linear(slope)

    h = HamiltonianParams(
        delta=_number(system, "delta", "system", 0.0),
        delta_prime=_number(system, "delta_prime", "system", 0.0),
        b0=abs(b0),
        omega0_freq=omega0,
    )
    p = SystemParams(h, _dissipator(system, "[system]"), system.get("relaxation_mode", "none"))

    if "t_span" in data and "cycles" in data:
        raise ValidationError("give either t_span or cycles, not both")
    if "t_span" in data:
        span = data["t_span"]
        if not isinstance(span, list) or len(span) != 2:
            raise ValidationError("t_span must be a list of two numbers")
        t_span = (_number({"a": span[0]}, "a", "t_span"), _number({"b": span[1]}, "b", "t_span"))
    elif "cycles" in data:
        cycles = _number(data, "cycles", "scenario")
        if not math.isfinite(d.period):
            raise ValidationError("cycles needs a periodic cosine drive; use t_span instead")
        if not cycles > 0:
            raise ValidationError("cycles must be positive")
        t_span = (0.0, cycles * d.period)
    else:
        raise ValidationError("scenario needs t_span or cycles")
    if not t_span[1] > t_span[0]:
        raise ValidationError(f"t_span must be increasing, got {t_span}")

    initial = data.get("initial", [0.0, 0.0, 1.0])
    if not isinstance(initial, list) or len(initial) != 3:
        raise ValidationError("initial must be a list of three numbers")
    v0 = BlochState.from_vector([_number({"v": c}, "v", "initial") for c in initial])
    if not v0.is_physical():
        raise ValidationError(f"initial state {initial} lies outside the Bloch ball")

    cfg = IntegratorConfig(**{k: _number(integ, k, "integrator") for k in integ})
    for key, value in outputs.items():
        if not isinstance(value, str) or not value:
            raise ValidationError(f"[outputs].{key} must be a non-empty path string")
    name = data.get("name", base_name)
    if not isinstance(name, str):
        raise ValidationError("name must be a string")
    return Scenario(name, p, d, v0, t_span, cfg, outputs)


def load_toml(path):
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(f"{path}: malformed TOML: {exc}") from None


def load_scenario(path):
    return scenario_from_dict(load_toml(path), Path(path).stem)


def set_dotted(data, key, value):
    """Return a copy of nested ``data`` with ``"table.key"`` (or a top-level key) set."""
    out = {k: dict(v) if isinstance(v, dict) else v for k, v in data.items()}
    parts = key.split(".")
    if len(parts) == 1:
        out[key] = value
    elif len(parts) == 2:
        out.setdefault(parts[0], {})
        if not isinstance(out[parts[0]], dict):
            raise ValidationError(f"{parts[0]} is not a table")
        out[parts[0]][parts[1]] = value
    else:
        raise ValidationError(f"sweep key must be 'table.key' or 'key', got {key!r}")
    return out


def dissipator_from_file(path):
    """Read dissipator rates for the positivity audit.

    Accepts a ``[thermal_bath]`` table (``g``, ``n_bar``), a ``[rates]`` table
    (``gamma1 .. c3`` or ``gamma_r``/``gamma``), or a full scenario file, in
    which case the rates come from its ``[system]`` table.
    """
    data = load_toml(path)
    if "system" in data:
        return scenario_from_dict(data, Path(path).stem).system.dissipator
    _reject_unknown(data, ("thermal_bath", "rates"), str(path))
    if ("thermal_bath" in data) == ("rates" in data):
        raise ValidationError(f"{path}: need exactly one of [thermal_bath], [rates] or [system]")
    if "thermal_bath" in data:
        tb = data["thermal_bath"]
        _reject_unknown(tb, ("g", "n_bar"), "[thermal_bath]")
        return thermal_bath(_number(tb, "g", "thermal_bath", 0.0), _number(tb, "n_bar", "thermal_bath", 0.0))
    rates = data["rates"]
    _reject_unknown(rates, RATE_KEYS + ("gamma_r", "gamma"), "[rates]")
    return _dissipator(rates, "[rates]")


def with_outputs(s, outputs):
    return replace(s, outputs=dict(outputs))
