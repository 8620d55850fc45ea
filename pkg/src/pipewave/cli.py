"""Command-line front end.

    pipewave simulate --config cfg [--out DIR]
    pipewave analytic --config cfg [--out DIR] [--variant NAME]
    pipewave compare  --config cfg [--out DIR] [--variant NAME]
                      [--front-exclusion on|off]
    pipewave sweep    --config cfg [--out DIR]

Exit status: 0 success, 1 configuration/validation error, 2 numerical
failure (instability or a strict settling check that cannot be met).
Partially written outputs are removed on failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np

from . import __version__, analytic, compare, fd_solver, report
from .analytic import HarmonicVariant, RegimeError
from .compare import NotSettledError
from .config import (ConfigError, RunConfig, SweepSpec, apply_sweep_value,
                     parse_config, serialize_config)
from .fd_solver import (InstabilityError, ProbeSeries, SimulationResult,
                        Snapshot, ValidationError)
from .model import derive_properties
from .pulses import PulseShape

_VARIANTS = ("auto", "semi_infinite", "finite", "rect_finite",
             "mechanical_analogue", "complex_amplitudes", "corrected")


class _OutDir:
    """Tracks written files so a failed run leaves no partial outputs."""

    def __init__(self, path: Path):
        self.path = path
        self.written: List[Path] = []
        path.mkdir(parents=True, exist_ok=True)

    def file(self, name: str) -> Path:
        p = self.path / name
        self.written.append(p)
        return p

    def cleanup(self):
        for p in self.written:
            try:
                p.unlink()
            except FileNotFoundError:
                pass


def _resolve_variant(requested: str, config: RunConfig) -> str:
    shape = config.pulse.shape
    if requested != "auto":
        return requested
    lo, hi = config.friction.active_interval
    fully = lo <= 1e-9 * config.pipe.L and hi >= config.pipe.L * (1 - 1e-12)
    if shape is PulseShape.SEMI_SINE:
        if not fully and config.friction.tau0 > 0:
            raise ValidationError(
                ["no closed-form oracle covers a partially embedded pipe; "
                 "choose --variant semi_infinite explicitly if the "
                 "approximation is acceptable"])
        return "finite"
    if shape is PulseShape.RECT:
        if not fully and config.friction.tau0 > 0:
            raise ValidationError(
                ["no closed-form oracle covers a partially embedded pipe"])
        return "rect_finite"
    if shape is PulseShape.CONTINUOUS_SINE:
        return "corrected"
    raise ValidationError([f"no automatic oracle for pulse shape "
                           f"{shape.value!r}"])


def _analytic_displacement_fn(variant: str, config: RunConfig,
                              ) -> Callable[[np.ndarray, float], np.ndarray]:
    pipe, friction, pulse = config.pipe, config.friction, config.pulse
    if variant == "semi_infinite":
        return lambda z, t: np.atleast_1d(
            analytic.displacement_semi_infinite(z, t, pipe, friction, pulse))
    if variant == "finite":
        return lambda z, t: np.array(
            [analytic.displacement_finite_rod(zi, t, pipe, friction, pulse)
             for zi in np.atleast_1d(z)])
    if variant == "rect_finite":
        return lambda z, t: np.array(
            [analytic.displacement_rect_finite(zi, t, pipe, friction, pulse)
             for zi in np.atleast_1d(z)])
    hv = HarmonicVariant(variant)
    return lambda z, t: np.atleast_1d(
        analytic.harmonic_solution(z, t, pipe, friction, pulse, hv))


def _analytic_result(variant: str, config: RunConfig) -> SimulationResult:
    """Oracle evaluated on the same grid/time samples the solver would use.

    Velocity columns follow the solver's output convention: backward
    difference of the oracle displacement over one time step.
    """
    grid = config.grid
    h_t, h_z = grid.h_t, grid.h_z
    n_steps = grid.n_steps
    z = np.arange(grid.n_z + 1) * h_z
    disp = _analytic_displacement_fn(variant, config)

    snaps = []
    for t_req in config.output.snapshot_times:
        idx = min(max(int(round(t_req / h_t)), 0), n_steps)
        t = idx * h_t
        u = disp(z, t)
        v = (compare.step_averaged_velocity(disp, z, t, h_t) if idx > 0
             else np.zeros_like(u))
        snaps.append(Snapshot(t_requested=t_req, t=t, z=z.copy(),
                              displacement=u, velocity=v))

    probes = []
    pipe, friction, pulse = config.pipe, config.friction, config.pulse
    tgrid = np.arange(1, n_steps + 1) * h_t
    for z_req in config.output.probe_positions:
        j = int(round(z_req / h_z))
        zj = j * h_z
        if variant == "finite":
            windows = analytic.finite_rod_windows(zj, pipe, friction, pulse)
            u = analytic.displacement_finite_rod(zj, tgrid, pipe, friction,
                                                 pulse, windows)
            u_prev = analytic.displacement_finite_rod(zj, tgrid - h_t, pipe,
                                                      friction, pulse, windows)
        elif variant == "rect_finite":
            u = analytic.displacement_rect_finite(zj, tgrid, pipe, friction,
                                                  pulse)
            u_prev = analytic.displacement_rect_finite(zj, tgrid - h_t, pipe,
                                                       friction, pulse)
        elif variant == "semi_infinite":
            u = analytic.displacement_semi_infinite(zj, tgrid, pipe, friction,
                                                    pulse)
            u_prev = analytic.displacement_semi_infinite(zj, tgrid - h_t,
                                                         pipe, friction, pulse)
        else:
            hv = HarmonicVariant(variant)
            u = analytic.harmonic_solution(zj, tgrid, pipe, friction, pulse, hv)
            u_prev = analytic.harmonic_solution(zj, tgrid - h_t, pipe,
                                                friction, pulse, hv)
        v = (np.asarray(u) - np.asarray(u_prev)) / h_t
        probes.append(ProbeSeries(z_requested=z_req, z=zj, t=tgrid,
                                  displacement=np.asarray(u), velocity=v))

    t_end = n_steps * h_t
    u_fin = disp(z, t_end) if n_steps > 0 else np.zeros_like(z)
    v_fin = (compare.step_averaged_velocity(disp, z, t_end, h_t)
             if n_steps > 0 else np.zeros_like(z))
    final = Snapshot(t_requested=grid.t_end, t=t_end, z=z.copy(),
                     displacement=u_fin, velocity=v_fin)
    props = derive_properties(pipe, friction)
    return SimulationResult(snapshots=snaps, probes=probes, final=final,
                            vmax=np.zeros_like(z), z=z, grid=grid,
                            courant=grid.courant(props.c))


def _write_result_tables(out: _OutDir, result: SimulationResult,
                         prefix: str = "") -> List[str]:
    files = []
    if result.snapshots:
        n = sum(s.z.size for s in result.snapshots)
        cols = {name: np.empty(n) for name in
                ("t_requested", "t", "z", "displacement", "velocity")}
        at = 0
        for s in result.snapshots:
            m = s.z.size
            cols["t_requested"][at:at + m] = s.t_requested
            cols["t"][at:at + m] = s.t
            cols["z"][at:at + m] = s.z
            cols["displacement"][at:at + m] = s.displacement
            cols["velocity"][at:at + m] = s.velocity
            at += m
        path = out.file(f"{prefix}snapshots.csv")
        report.write_table(path, [
            ("t_requested", "s", cols["t_requested"]),
            ("t", "s", cols["t"]),
            ("z", "m", cols["z"]),
            ("displacement", "m", cols["displacement"]),
            ("velocity", "m/s", cols["velocity"])])
        files.append(path.name)
    if result.probes:
        n = sum(p.t.size for p in result.probes)
        z_col = np.empty(n)
        t_col = np.empty(n)
        u_col = np.empty(n)
        v_col = np.empty(n)
        at = 0
        for p in result.probes:
            m = p.t.size
            z_col[at:at + m] = p.z
            t_col[at:at + m] = p.t
            u_col[at:at + m] = p.displacement
            v_col[at:at + m] = p.velocity
            at += m
        path = out.file(f"{prefix}probes.csv")
        report.write_table(path, [
            ("z", "m", z_col), ("t", "s", t_col),
            ("displacement", "m", u_col), ("velocity", "m/s", v_col)])
        files.append(path.name)
    path = out.file(f"{prefix}final_profile.csv")
    report.write_table(path, [
        ("z", "m", result.final.z),
        ("displacement", "m", result.final.displacement),
        ("velocity", "m/s", result.final.velocity)])
    files.append(path.name)
    return files


def _manifest_payload(command: str, config: RunConfig, files: List[str],
                      extra: Optional[dict] = None) -> dict:
    props = derive_properties(config.pipe, config.friction)
    payload = {
        "tool": "pipewave",
        "version": __version__,
        "command": command,
        "config": serialize_config(config).splitlines(),
        "grid": {
            "h_t_s": config.grid.h_t,
            "h_z_m": config.grid.h_z,
            "n_z": config.grid.n_z,
            "t_end_s": config.grid.t_end,
            "n_steps": config.grid.n_steps,
            "courant": config.grid.courant(props.c),
        },
        "derived": {
            "wave_speed_mps": props.c,
            "cross_section_m2": props.S_t,
            "perimeter_m": props.P_t,
            "friction_deceleration_mps2": props.a_f,
            "friction_force_N": props.F_tp,
        },
        "velocity_convention": "backward difference over one time step",
        "files": sorted(files),
    }
    if extra:
        payload.update(extra)
    return payload


def _cmd_simulate(config: RunConfig, out: _OutDir) -> int:
    result = fd_solver.run(config.pipe, config.friction, config.pulse,
                           config.grid,
                           snapshot_times=config.output.snapshot_times,
                           probe_positions=config.output.probe_positions)
    files = _write_result_tables(out, result)
    path = out.file("vmax_profile.csv")
    report.write_table(path, [("z", "m", result.z),
                              ("vmax", "m/s", result.vmax)])
    files.append(path.name)
    for name, fn in (("fig_snapshots.png",
                      lambda p: report.plot_snapshots(p, result.snapshots,
                                                      "simulated profiles")),
                     ("fig_probes.png",
                      lambda p: report.plot_probes(p, result.probes,
                                                   "simulated oscillograms"))):
        p = out.file(name)
        if fn(p) is None:
            out.written.remove(p)
        else:
            files.append(name)
    report.write_manifest(out.file("manifest.json"),
                          _manifest_payload("simulate", config, files))
    return 0


def _cmd_analytic(config: RunConfig, out: _OutDir, variant: str) -> int:
    variant = _resolve_variant(variant, config)
    result = _analytic_result(variant, config)
    files = _write_result_tables(out, result)
    for name, fn in (("fig_snapshots.png",
                      lambda p: report.plot_snapshots(
                          p, result.snapshots, f"analytic profiles ({variant})")),
                     ("fig_probes.png",
                      lambda p: report.plot_probes(
                          p, result.probes, f"analytic oscillograms ({variant})"))):
        p = out.file(name)
        if fn(p) is None:
            out.written.remove(p)
        else:
            files.append(name)
    report.write_manifest(out.file("manifest.json"),
                          _manifest_payload("analytic", config, files,
                                            {"variant": variant}))
    return 0


def _cmd_compare(config: RunConfig, out: _OutDir, variant: str,
                 front_exclusion: Optional[bool]) -> int:
    if front_exclusion is None:
        front_exclusion = config.output.front_exclusion
    variant = _resolve_variant(variant, config)
    fd_result = fd_solver.run(config.pipe, config.friction, config.pulse,
                              config.grid,
                              snapshot_times=config.output.snapshot_times,
                              probe_positions=config.output.probe_positions)
    an_result = _analytic_result(variant, config)
    files = _write_result_tables(out, fd_result, prefix="fd_")
    files += _write_result_tables(out, an_result, prefix="analytic_")

    rows = []
    for fd_s, an_s in zip(fd_result.snapshots, an_result.snapshots):
        mask = None
        if front_exclusion:
            mask = compare.support_exclusion_mask(
                fd_s.z, an_s.velocity, width=2.0 * config.grid.h_z)
        for field, kind in (("velocity", 0.0), ("displacement", 1.0)):
            try:
                rep = compare.error_norms(getattr(fd_s, field),
                                          getattr(an_s, field),
                                          axis_values=fd_s.z, mask=mask)
                rows.append((fd_s.t, kind, rep.l2_rel, rep.linf_rel,
                             rep.linf_location, rep.peak_reference))
            except ValueError:
                rows.append((fd_s.t, kind, float("nan"), float("nan"),
                             float("nan"), 0.0))
    for fd_p, an_p in zip(fd_result.probes, an_result.probes):
        if fd_p.t.size == 0:
            continue
        mask = None
        if front_exclusion:
            mask = compare.support_exclusion_mask(
                fd_p.t, an_p.velocity, width=2.0 * config.grid.h_t)
        for field, kind in (("velocity", 2.0), ("displacement", 3.0)):
            try:
                rep = compare.error_norms(getattr(fd_p, field),
                                          getattr(an_p, field),
                                          axis_values=fd_p.t, mask=mask)
                rows.append((fd_p.z, kind, rep.l2_rel, rep.linf_rel,
                             rep.linf_location, rep.peak_reference))
            except ValueError:
                rows.append((fd_p.z, kind, float("nan"), float("nan"),
                             float("nan"), 0.0))
    if rows:
        arr = np.asarray(rows, dtype=float)
        path = out.file("norms.csv")
        # kind: 0 snapshot velocity, 1 snapshot displacement,
        #       2 probe velocity, 3 probe displacement
        report.write_table(path, [
            ("where", "s_or_m", arr[:, 0]), ("kind", "-", arr[:, 1]),
            ("l2_rel", "-", arr[:, 2]), ("linf_rel", "-", arr[:, 3]),
            ("linf_location", "s_or_m", arr[:, 4]),
            ("peak_reference", "field", arr[:, 5])])
        files.append(path.name)

    for name, fn in (("fig_compare_snapshots.png",
                      lambda p: report.plot_snapshots(
                          p, fd_result.snapshots, f"time-stepped vs {variant}",
                          overlay=an_result.snapshots)),
                     ("fig_compare_probes.png",
                      lambda p: report.plot_probes(
                          p, fd_result.probes, f"time-stepped vs {variant}",
                          overlay=an_result.probes))):
        p = out.file(name)
        if fn(p) is None:
            out.written.remove(p)
        else:
            files.append(name)
    report.write_manifest(
        out.file("manifest.json"),
        _manifest_payload("compare", config, files,
                          {"variant": variant,
                           "front_exclusion": front_exclusion}))
    return 0


def _cmd_sweep(config: RunConfig, out: _OutDir) -> int:
    sweep: Optional[SweepSpec] = config.sweep
    if sweep is None:
        raise ValidationError(["sweep command requires a [sweep] section"])
    measure_at = (sweep.measure_at if sweep.measure_at is not None
                  else config.grid.t_end)
    values, forces, u_measure, slips, settled = [], [], [], [], []
    for value in sweep.values:
        cfg = apply_sweep_value(config, sweep.parameter, value)
        result = fd_solver.run(cfg.pipe, cfg.friction, cfg.pulse, cfg.grid,
                               probe_positions=[0.0])
        series = result.probes[0]
        idx = min(max(int(round(measure_at / cfg.grid.h_t)) - 1, 0),
                  series.t.size - 1)
        props = derive_properties(cfg.pipe, cfg.friction)
        try:
            slip = compare.final_slip(series.t, series.displacement,
                                      series.velocity)
            ok = 1.0
        except NotSettledError:
            slip = compare.trailing_mean(series.displacement)
            ok = 0.0
        values.append(value)
        forces.append(props.F_tp)
        u_measure.append(series.displacement[idx] if series.t.size else 0.0)
        slips.append(slip)
        settled.append(ok)

    path = out.file("sweep.csv")
    report.write_table(path, [
        (sweep.parameter.replace(".", "_"), "SI", np.asarray(values)),
        ("friction_force", "N", np.asarray(forces)),
        ("u_at_measure", "m", np.asarray(u_measure)),
        ("final_slip", "m", np.asarray(slips)),
        ("settled", "-", np.asarray(settled))])
    files = [path.name]

    fit = None
    if sweep.fit:
        fit = compare.fit_power_law(values, u_measure)
        fpath = out.file("fit.csv")
        report.write_table(fpath, [
            ("coeff", "-", np.asarray([fit.coeff])),
            ("exponent", "-", np.asarray([fit.exponent])),
            ("r_squared", "-", np.asarray([fit.r_squared]))])
        files.append(fpath.name)
    fig = out.file("fig_sweep.png")
    report.plot_sweep(fig, np.asarray(values), np.asarray(u_measure),
                      xlabel=f"{sweep.parameter} [SI]", fit=fit,
                      title=f"sweep over {sweep.parameter}, displacement "
                            f"at t = {measure_at * 1e3:.6g} ms")
    files.append(fig.name)
    extra = {"measure_at_s": measure_at}
    if fit is not None:
        extra["fit"] = {"coeff": fit.coeff, "exponent": fit.exponent,
                        "r_squared": fit.r_squared}
    report.write_manifest(out.file("manifest.json"),
                          _manifest_payload("sweep", config, files, extra))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pipewave",
        description="Longitudinal waves in an elastic pipe with side-surface "
                    "dry friction: explicit time stepping, closed-form "
                    "estimates, and cross-validation of the two.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
            ("simulate", "time-step the configuration and write tables"),
            ("analytic", "evaluate the closed-form solution on the same grid"),
            ("compare", "run both and report error norms"),
            ("sweep", "run a parameter sweep and fit a power law")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, type=Path,
                       help="configuration file")
        p.add_argument("--out", type=Path, default=Path("out"),
                       help="output directory (default: ./out)")
        if name in ("analytic", "compare"):
            p.add_argument("--variant", choices=_VARIANTS, default="auto",
                           help="closed-form variant (default: auto)")
        if name == "compare":
            p.add_argument("--front-exclusion", choices=("on", "off"),
                           default=None,
                           help="exclude a strip around moving support edges "
                                "(default: from config)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.config.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    try:
        config = parse_config(text)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = _OutDir(args.out)
    try:
        if args.command == "simulate":
            return _cmd_simulate(config, out)
        if args.command == "analytic":
            return _cmd_analytic(config, out, args.variant)
        if args.command == "compare":
            fx = (None if args.front_exclusion is None
                  else args.front_exclusion == "on")
            return _cmd_compare(config, out, args.variant, fx)
        return _cmd_sweep(config, out)
    except (ValidationError, ConfigError, RegimeError) as exc:
        out.cleanup()
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InstabilityError, NotSettledError) as exc:
        out.cleanup()
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
