"""Physical configuration of the driven pipe and derived quantities.

Geometry and material of a tubular pipe, the dry-friction contact with the
surrounding soil, and the space-time grid.  Everything downstream works in
SI base units; unit conversion belongs to the I/O layer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .pulses import Pulse, PulseShape


@dataclass(frozen=True)
class PipeSpec:
    """Tubular pipe geometry and material.

    Attributes
    ----------
    R : float
        Outer radius [m].
    h : float
        Wall thickness [m], 0 < h < 2R.
    L : float
        Pipe length [m].
    L1 : float
        Embedded length [m], 0 < L1 <= L.
    E : float
        Young modulus [Pa].
    rho : float
        Material density [kg/m^3].
    """

    R: float
    h: float
    L: float
    L1: float
    E: float
    rho: float


def pipe_diagnostics(p: PipeSpec) -> List[str]:
    out = []
    if not p.R > 0:
        out.append(f"pipe.R must be positive, got {p.R}")
    if not (0 < p.h < 2 * p.R):
        out.append(f"pipe.h must lie in (0, 2R) = (0, {2 * p.R}), got {p.h}")
    if not p.L > 0:
        out.append(f"pipe.L must be positive, got {p.L}")
    if not (0 < p.L1 <= p.L):
        out.append(f"pipe.L1 must lie in (0, L] = (0, {p.L}], got {p.L1}")
    if not p.E > 0:
        out.append(f"pipe.E must be positive, got {p.E}")
    if not p.rho > 0:
        out.append(f"pipe.rho must be positive, got {p.rho}")
    return out


def default_active_interval(pipe: PipeSpec) -> Tuple[float, float]:
    """Soil contact at the far (driven) end: [L - L1, L]."""
    return (pipe.L - pipe.L1, pipe.L)


@dataclass(frozen=True)
class FrictionSpec:
    """Coulomb dry-friction contact on the pipe side surface.

    Attributes
    ----------
    tau0 : float
        Contact shear stress [Pa], >= 0.
    active_interval : (float, float)
        Closed z-interval [m] on which side friction acts.
    """

    tau0: float
    active_interval: Tuple[float, float]

    @property
    def active_length(self) -> float:
        lo, hi = self.active_interval
        return hi - lo


def friction_for_pipe(pipe: PipeSpec, tau0: float,
                      active_interval: Optional[Tuple[float, float]] = None,
                      ) -> FrictionSpec:
    if active_interval is None:
        active_interval = default_active_interval(pipe)
    return FrictionSpec(tau0=tau0, active_interval=active_interval)


@dataclass(frozen=True)
class DerivedProps:
    """Quantities derived from pipe and friction specs.

    Attributes
    ----------
    c : float
        Longitudinal wave speed sqrt(E/rho) [m/s].
    S_t : float
        Cross-section area pi h (2R - h) [m^2].
    P_t : float
        Outer perimeter 2 pi R [m].
    a_f : float
        Friction deceleration tau0 P_t / (rho S_t) [m/s^2].
    F_tp : float
        Total side friction force over the active interval [N].
    """

    c: float
    S_t: float
    P_t: float
    a_f: float
    F_tp: float


def derive_properties(pipe: PipeSpec, friction: FrictionSpec) -> DerivedProps:
    """Closed-form derived quantities; raises on invalid specs."""
    diags = pipe_diagnostics(pipe)
    if friction.tau0 < 0:
        diags.append(f"friction.tau0 must be >= 0, got {friction.tau0}")
    lo, hi = friction.active_interval
    if not (0.0 <= lo <= hi <= pipe.L):
        diags.append(
            f"friction.active_interval ({lo}, {hi}) must lie inside [0, {pipe.L}]")
    if diags:
        raise ValueError("; ".join(diags))
    c = math.sqrt(pipe.E / pipe.rho)
    S_t = math.pi * pipe.h * (2.0 * pipe.R - pipe.h)
    P_t = 2.0 * math.pi * pipe.R
    a_f = friction.tau0 * P_t / (pipe.rho * S_t)
    F_tp = friction.tau0 * P_t * friction.active_length
    return DerivedProps(c=c, S_t=S_t, P_t=P_t, a_f=a_f, F_tp=F_tp)


@dataclass(frozen=True)
class GridSpec:
    """Uniform space-time grid.

    Attributes
    ----------
    h_t : float
        Time step [s].
    h_z : float
        Space step [m]; nodes z_j = j h_z, j = 0..n_z.
    n_z : int
        Last node index; n_z h_z must equal the pipe length.
    t_end : float
        Simulation horizon [s].
    """

    h_t: float
    h_z: float
    n_z: int
    t_end: float

    def courant(self, c: float) -> float:
        return c * self.h_t / self.h_z

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.h_t))


def grid_for_pipe(pipe: PipeSpec, h_z: float, t_end: float,
                  courant: float = 1.0, h_t: Optional[float] = None,
                  ) -> GridSpec:
    """Build a grid for the pipe; default time step at Courant 1."""
    if h_z <= 0:
        raise ValueError(f"grid.h_z must be positive, got {h_z}")
    if h_t is None:
        if pipe.E <= 0 or pipe.rho <= 0:
            raise ValueError("cannot derive the wave speed for the default "
                             "time step: pipe.E and pipe.rho must be positive")
        h_t = courant * h_z / math.sqrt(pipe.E / pipe.rho)
    n_z = int(round(pipe.L / h_z))
    return GridSpec(h_t=h_t, h_z=h_z, n_z=n_z, t_end=t_end)


def validate_config(pipe: PipeSpec, friction: FrictionSpec, pulse: Pulse,
                    grid: GridSpec) -> List[str]:
    """All cross-checks in one place; empty list means the setup is runnable.

    Returns one diagnostic string per violation instead of raising, so a
    front end can report them all at once.
    """
    diags = pipe_diagnostics(pipe)

    if friction.tau0 < 0:
        diags.append(f"friction.tau0 must be >= 0, got {friction.tau0}")
    lo, hi = friction.active_interval
    if hi < lo:
        diags.append(f"friction.active_interval is reversed: ({lo}, {hi})")
    elif not (0.0 <= lo and hi <= pipe.L):
        diags.append(
            f"friction.active_interval ({lo}, {hi}) must lie inside [0, {pipe.L}]")

    if pulse.P0 <= 0:
        diags.append(f"pulse.P0 must be positive, got {pulse.P0}")
    if pulse.shape is not PulseShape.CONTINUOUS_SINE:
        if pulse.t0 is None or pulse.t0 <= 0:
            diags.append(f"pulse.t0 must be positive, got {pulse.t0}")
    elif pulse.omega_star is None or pulse.omega_star <= 0:
        diags.append("pulse.omega_star must be positive for a continuous sine")

    if grid.h_t <= 0:
        diags.append(f"grid.h_t must be positive, got {grid.h_t}")
    if grid.h_z <= 0:
        diags.append(f"grid.h_z must be positive, got {grid.h_z}")
    if grid.n_z < 2:
        diags.append(f"grid.n_z must be at least 2, got {grid.n_z}")
    if grid.t_end < 0:
        diags.append(f"grid.t_end must be >= 0, got {grid.t_end}")
    if grid.h_t > 0 and grid.h_z > 0:
        if abs(grid.n_z * grid.h_z - pipe.L) > 1e-9 * max(pipe.L, 1.0):
            diags.append(
                f"grid does not tile the pipe: n_z*h_z = {grid.n_z * grid.h_z} "
                f"but pipe.L = {pipe.L}")
        if pipe.E > 0 and pipe.rho > 0:
            nu = grid.courant(math.sqrt(pipe.E / pipe.rho))
            if nu > 1.0 + 1e-12:
                diags.append(
                    f"Courant number c*h_t/h_z = {nu:.6f} exceeds 1; "
                    "the explicit scheme is unstable")
    return diags
