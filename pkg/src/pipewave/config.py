"""Run configuration: flat key-value files with explicit engineering units.

Format: ``[section]`` headers followed by ``key = value [unit]`` lines;
``#`` starts a comment.  Sections: pipe, friction, pulse, grid, output,
sweep.  Values accept the units the source material quotes (MPa, kN, ms,
mm, ...) so published parameter lists can be pasted verbatim; everything is
converted to SI on parse.  Unknown sections, keys or units are rejected
with the offending line number.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

from .model import (FrictionSpec, GridSpec, PipeSpec, default_active_interval,
                    grid_for_pipe, validate_config)
from .pulses import Pulse, PulseShape

_LENGTH = {"m": 1.0, "mm": 1e-3, "cm": 1e-2, "km": 1e3}
_PRESSURE = {"Pa": 1.0, "kPa": 1e3, "MPa": 1e6, "GPa": 1e9}
_FORCE = {"N": 1.0, "kN": 1e3, "MN": 1e6}
_TIME = {"s": 1.0, "ms": 1e-3, "us": 1e-6}
_DENSITY = {"kg/m3": 1.0, "kg/m^3": 1.0}
_OMEGA = {"rad/s": 1.0, "1/s": 1.0, "rad/ms": 1e3, "1/ms": 1e3}
_NONE: Dict[str, float] = {}

# section -> key -> (unit table, is_list)
_SCHEMA: Dict[str, Dict[str, Tuple[Dict[str, float], bool]]] = {
    "pipe": {
        "R": (_LENGTH, False), "h": (_LENGTH, False), "L": (_LENGTH, False),
        "L1": (_LENGTH, False), "E": (_PRESSURE, False),
        "rho": (_DENSITY, False),
    },
    "friction": {
        "tau0": (_PRESSURE, False),
        "active_from": (_LENGTH, False), "active_to": (_LENGTH, False),
    },
    "pulse": {
        "shape": (_NONE, False), "P0": (_FORCE, False),
        "t0": (_TIME, False), "omega": (_OMEGA, False),
    },
    "grid": {
        "h_z": (_LENGTH, False), "h_t": (_TIME, False),
        "courant": (_NONE, False), "t_end": (_TIME, False),
    },
    "output": {
        "snapshots": (_TIME, True), "probes": (_LENGTH, True),
        "front_exclusion": (_NONE, False),
    },
    "sweep": {
        "parameter": (_NONE, False), "values": (_NONE, True),
        "measure_at": (_TIME, False), "fit": (_NONE, False),
    },
}

_SWEEP_UNITS = {
    "pipe.R": _LENGTH, "pipe.h": _LENGTH, "pipe.L": _LENGTH,
    "pipe.L1": _LENGTH, "pipe.E": _PRESSURE, "pipe.rho": _DENSITY,
    "friction.tau0": _PRESSURE,
    "pulse.P0": _FORCE, "pulse.t0": _TIME, "pulse.omega": _OMEGA,
}

_SHAPES = {
    "semi_sine": PulseShape.SEMI_SINE,
    "rect": PulseShape.RECT,
    "continuous_sine": PulseShape.CONTINUOUS_SINE,
}


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None
                         else f"line {line}: {message}")


@dataclass(frozen=True)
class OutputSpec:
    snapshot_times: Tuple[float, ...] = ()
    probe_positions: Tuple[float, ...] = ()
    front_exclusion: bool = True


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: Tuple[float, ...]
    measure_at: Optional[float] = None
    fit: bool = False


@dataclass(frozen=True)
class RunConfig:
    pipe: PipeSpec
    friction: FrictionSpec
    pulse: Pulse
    grid: GridSpec
    output: OutputSpec = OutputSpec()
    sweep: Optional[SweepSpec] = None

    def diagnostics(self) -> List[str]:
        return validate_config(self.pipe, self.friction, self.pulse, self.grid)


def _parse_quantity(token: str, units: Dict[str, float], line: int,
                    key: str) -> float:
    parts = token.split()
    if len(parts) == 1:
        num, unit = parts[0], None
    elif len(parts) == 2:
        num, unit = parts
    else:
        raise ConfigError(f"cannot parse value {token!r} for {key}", line)
    try:
        value = float(num)
    except ValueError:
        raise ConfigError(f"{key}: {num!r} is not a number", line)
    if unit is None:
        return value
    if unit not in units:
        allowed = ", ".join(sorted(units)) or "no unit"
        raise ConfigError(f"{key}: unknown unit {unit!r} (allowed: {allowed})",
                          line)
    return value * units[unit]


def _parse_flag(token: str, line: int, key: str) -> bool:
    low = token.strip().lower()
    if low in ("on", "true", "yes", "1"):
        return True
    if low in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected on/off, got {token!r}", line)


def parse_config(text: str) -> RunConfig:
    """Parse a configuration document into a validated RunConfig (SI units).

    Raises :class:`ConfigError` with a line number on malformed input and
    ValueError listing every validation diagnostic when the parsed setup
    is inconsistent.
    """
    raw: Dict[str, Dict[str, Tuple[str, int]]] = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section [{section}]", lineno)
            raw.setdefault(section, {})
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {stripped!r}",
                              lineno)
        if section is None:
            raise ConfigError("key outside of any [section]", lineno)
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _SCHEMA[section]:
            raise ConfigError(f"unknown key {key!r} in section [{section}]",
                              lineno)
        if key in raw[section]:
            raise ConfigError(f"duplicate key {key!r} in section [{section}]",
                              lineno)
        raw[section][key] = (value, lineno)

    for required in ("pipe", "pulse", "grid"):
        if required not in raw:
            raise ConfigError(f"missing required section [{required}]")

    def take(section: str, key: str, required: bool = False):
        entry = raw.get(section, {}).pop(key, None)
        if entry is None:
            if required:
                raise ConfigError(f"missing key {key!r} in section [{section}]")
            return None
        return entry

    def quantity(section: str, key: str, required: bool = False):
        entry = take(section, key, required)
        if entry is None:
            return None
        units = _SCHEMA[section][key][0]
        return _parse_quantity(entry[0], units, entry[1], key)

    pipe_vals = {k: quantity("pipe", k, required=True)
                 for k in ("R", "h", "L", "L1", "E", "rho")}
    pipe = PipeSpec(**pipe_vals)

    tau0 = quantity("friction", "tau0")
    active_from = quantity("friction", "active_from")
    active_to = quantity("friction", "active_to")
    if (active_from is None) != (active_to is None):
        raise ConfigError("friction.active_from and friction.active_to "
                          "must be given together")
    interval = (default_active_interval(pipe) if active_from is None
                else (active_from, active_to))
    friction = FrictionSpec(tau0=0.0 if tau0 is None else tau0,
                            active_interval=interval)

    shape_entry = take("pulse", "shape", required=True)
    shape_name = shape_entry[0].strip().lower()
    if shape_name == "custom":
        raise ConfigError("custom pulse profiles are library-only; "
                          "configuration files support semi_sine, rect "
                          "and continuous_sine", shape_entry[1])
    if shape_name not in _SHAPES:
        raise ConfigError(f"unknown pulse shape {shape_name!r}",
                          shape_entry[1])
    shape = _SHAPES[shape_name]
    P0 = quantity("pulse", "P0", required=True)
    t0 = quantity("pulse", "t0")
    omega = quantity("pulse", "omega")
    try:
        if shape is PulseShape.CONTINUOUS_SINE:
            pulse = Pulse(shape, P0=P0, omega_star=omega)
        else:
            pulse = Pulse(shape, P0=P0, t0=t0)
    except ValueError as exc:
        raise ConfigError(str(exc))

    h_z = quantity("grid", "h_z", required=True)
    h_t = quantity("grid", "h_t")
    courant = quantity("grid", "courant")
    t_end = quantity("grid", "t_end", required=True)
    if h_t is not None and courant is not None:
        raise ConfigError("grid.h_t and grid.courant are mutually exclusive")
    try:
        grid = grid_for_pipe(pipe, h_z=h_z, t_end=t_end,
                             courant=1.0 if courant is None else courant,
                             h_t=h_t)
    except ValueError as exc:
        raise ConfigError(str(exc))

    def quantity_list(section: str, key: str):
        entry = take(section, key)
        if entry is None:
            return ()
        units = _SCHEMA[section][key][0]
        return tuple(_parse_quantity(tok.strip(), units, entry[1], key)
                     for tok in entry[0].split(",") if tok.strip())

    snapshots = quantity_list("output", "snapshots")
    probes = quantity_list("output", "probes")
    fx_entry = take("output", "front_exclusion")
    front_exclusion = (True if fx_entry is None
                       else _parse_flag(fx_entry[0], fx_entry[1],
                                        "front_exclusion"))
    output = OutputSpec(snapshot_times=snapshots, probe_positions=probes,
                        front_exclusion=front_exclusion)

    sweep = None
    if "sweep" in raw:
        param_entry = take("sweep", "parameter", required=True)
        param = param_entry[0].strip()
        if param not in _SWEEP_UNITS:
            raise ConfigError(
                f"sweep.parameter must be one of {sorted(_SWEEP_UNITS)}, "
                f"got {param!r}", param_entry[1])
        values_entry = take("sweep", "values", required=True)
        values = tuple(
            _parse_quantity(tok.strip(), _SWEEP_UNITS[param],
                            values_entry[1], "values")
            for tok in values_entry[0].split(",") if tok.strip())
        if not values:
            raise ConfigError("sweep.values is empty", values_entry[1])
        measure_at = quantity("sweep", "measure_at")
        fit_entry = take("sweep", "fit")
        fit = (False if fit_entry is None
               else _parse_flag(fit_entry[0], fit_entry[1], "fit"))
        sweep = SweepSpec(parameter=param, values=values,
                          measure_at=measure_at, fit=fit)

    for section, leftover in raw.items():
        if leftover:
            key = next(iter(leftover))
            raise ConfigError(f"unhandled key {key!r} in section [{section}]",
                              leftover[key][1])

    config = RunConfig(pipe=pipe, friction=friction, pulse=pulse, grid=grid,
                       output=output, sweep=sweep)
    diags = config.diagnostics()
    if diags:
        raise ConfigError("invalid configuration: " + "; ".join(diags))
    return config


def serialize_config(config: RunConfig) -> str:
    """Render a RunConfig back to the file format (SI units, full precision).

    ``parse_config(serialize_config(c))`` reproduces ``c`` exactly.
    """
    lines = ["[pipe]"]
    p = config.pipe
    for key, val in (("R", p.R), ("h", p.h), ("L", p.L), ("L1", p.L1),
                     ("E", p.E), ("rho", p.rho)):
        lines.append(f"{key} = {val!r}")
    lines.append("")
    lines.append("[friction]")
    lines.append(f"tau0 = {config.friction.tau0!r}")
    lo, hi = config.friction.active_interval
    lines.append(f"active_from = {lo!r}")
    lines.append(f"active_to = {hi!r}")
    lines.append("")
    lines.append("[pulse]")
    lines.append(f"shape = {config.pulse.shape.value}")
    lines.append(f"P0 = {config.pulse.P0!r}")
    if config.pulse.shape is PulseShape.CONTINUOUS_SINE:
        lines.append(f"omega = {config.pulse.omega_star!r}")
    else:
        lines.append(f"t0 = {config.pulse.t0!r}")
    lines.append("")
    lines.append("[grid]")
    g = config.grid
    lines.append(f"h_z = {g.h_z!r}")
    lines.append(f"h_t = {g.h_t!r}")
    lines.append(f"t_end = {g.t_end!r}")
    lines.append("")
    lines.append("[output]")
    if config.output.snapshot_times:
        lines.append("snapshots = "
                     + ", ".join(repr(t) for t in config.output.snapshot_times))
    if config.output.probe_positions:
        lines.append("probes = "
                     + ", ".join(repr(z) for z in config.output.probe_positions))
    lines.append("front_exclusion = "
                 + ("on" if config.output.front_exclusion else "off"))
    if config.sweep is not None:
        lines.append("")
        lines.append("[sweep]")
        lines.append(f"parameter = {config.sweep.parameter}")
        lines.append("values = "
                     + ", ".join(repr(v) for v in config.sweep.values))
        if config.sweep.measure_at is not None:
            lines.append(f"measure_at = {config.sweep.measure_at!r}")
        lines.append("fit = " + ("on" if config.sweep.fit else "off"))
    return "\n".join(lines) + "\n"


def run_simulation(config: RunConfig):
    """Time-step a full RunConfig (snapshots/probes per its output spec)."""
    from . import fd_solver
    return fd_solver.run(config.pipe, config.friction, config.pulse,
                         config.grid,
                         snapshot_times=config.output.snapshot_times,
                         probe_positions=config.output.probe_positions)


def apply_sweep_value(config: RunConfig, parameter: str,
                      value: float) -> RunConfig:
    """Derived config with one pipe/friction/pulse field replaced.

    The grid keeps its spatial step but is rebuilt when the swept field
    changes the wave speed or pipe length; the default friction interval
    follows a swept embedment length.
    """
    section, name = parameter.split(".", 1)
    pipe, friction, pulse = config.pipe, config.friction, config.pulse
    if section == "pipe":
        pipe = replace(pipe, **{name: value})
        if name in ("L", "L1"):
            friction = replace(friction,
                               active_interval=default_active_interval(pipe))
    elif section == "friction":
        friction = replace(friction, **{name: value})
    elif section == "pulse":
        field_name = "omega_star" if name == "omega" else name
        pulse = replace(pulse, **{field_name: value})
    else:
        raise ValueError(f"cannot sweep {parameter!r}")
    c_old = math.sqrt(config.pipe.E / config.pipe.rho)
    courant = config.grid.courant(c_old)
    grid = grid_for_pipe(pipe, h_z=config.grid.h_z, t_end=config.grid.t_end,
                         courant=courant)
    return RunConfig(pipe=pipe, friction=friction, pulse=pulse, grid=grid,
                     output=config.output, sweep=config.sweep)
