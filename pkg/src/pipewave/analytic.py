"""Approximate closed-form solutions for the friction-damped pipe.

A single forward-running half-sine load erodes from below as Coulomb
friction consumes it: at time t only the part of the pulse whose force
exceeds the accumulated friction level survives.  The surviving window is
delimited by time offsets (eps) that solve transcendental sine-versus-line
equations; everything else here is assembled from those offsets:

* semi-infinite pipe: velocity and displacement of the running pulse,
  pulse decay time and maximum disturbed depth, amplitude threshold for
  the disturbance to reach the far end;
* finite pipe, friction along the whole length: reflection sums with one
  eroded window per end-to-end transit, and the cumulative slip of the
  loaded cross-section after all reflections have decayed (half-sine and
  rectangular loads);
* continuous sinusoidal load: three steady-state amplitude approximations.

Validity: the sliding direction must stay non-negative, which holds while
the pulse duration does not exceed the decay time (t0 <= t_star); calls
outside that regime raise :class:`RegimeError` rather than returning a
wrong number.  All quantities SI.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from .model import FrictionSpec, PipeSpec, derive_properties
from .pulses import Pulse, PulseShape

ArrayLike = Union[float, np.ndarray]


class NoRootInRange(ValueError):
    """The sine never meets the line on the bracket: the pulse is consumed."""


class RegimeError(ValueError):
    """Configuration outside the validity regime of the closed forms."""


@dataclass(frozen=True)
class EpsSolution:
    """Root of sin(omega_star * eps) = rhs_offset + rhs_slope * eps."""

    eps: float
    residual: float
    bracket: Tuple[float, float]


@dataclass(frozen=True)
class DecayEstimates:
    """Pulse decay time and maximum disturbed depth (inf when frictionless)."""

    t_star: float
    z_star: float


@dataclass(frozen=True)
class ReachThreshold:
    threshold: float            # amplitude needed to disturb the far end [N]
    reached: bool
    simplified: float           # long-pipe limit F_tp / 2 [N]


@dataclass(frozen=True)
class ReflectionWindow:
    """Survival window(s) of the n-th end-to-end transit at a fixed z.

    The direct path (length 2Ln + z) gives the ``a`` window, the path
    reflected off the far end (length 2L(n+1) - z) the ``b`` window.  A
    window whose erosion offsets admit no root never arrives and its
    fields are None.  Edges satisfy a2 <= a1 and b2 <= b1.
    """

    n: int
    eps11: Optional[float] = None
    eps12: Optional[float] = None
    a1: Optional[float] = None
    a2: Optional[float] = None
    eps21: Optional[float] = None
    eps22: Optional[float] = None
    b1: Optional[float] = None
    b2: Optional[float] = None


@dataclass(frozen=True)
class SlipResult:
    """Cumulative slip of the loaded cross-section [m]."""

    exact: float
    estimate: float
    n_star: int


class HarmonicVariant(enum.Enum):
    MECHANICAL_ANALOGUE = "mechanical_analogue"
    COMPLEX_AMPLITUDES = "complex_amplitudes"
    CORRECTED = "corrected"


# ---------------------------------------------------------------------------
# transcendental erosion offsets
# ---------------------------------------------------------------------------

def solve_eps(rhs_slope: float, rhs_offset: float, omega_star: float,
              t0: float, residual_tol: float = 1e-12,
              n_scan: int = 256) -> EpsSolution:
    """Smallest root of sin(omega_star*eps) = rhs_offset + rhs_slope*eps
    on [0, t0/2].

    Bracketing scan plus bisection; unconditionally robust for the
    sine-versus-line systems that arise from pulse erosion.  Raises
    :class:`NoRootInRange` when the curves never meet on the bracket,
    which encodes the pulse being fully consumed by friction.
    """
    hi = 0.5 * t0

    def f(e: float) -> float:
        return math.sin(omega_star * e) - (rhs_offset + rhs_slope * e)

    f0 = f(0.0)
    if abs(f0) <= residual_tol:
        return EpsSolution(eps=0.0, residual=f0, bracket=(0.0, 0.0))

    xs = np.linspace(0.0, hi, n_scan + 1)
    prev_x, prev_f = 0.0, f0
    for x in xs[1:]:
        fx = f(float(x))
        if abs(fx) <= residual_tol:
            return EpsSolution(eps=float(x), residual=fx,
                               bracket=(prev_x, float(x)))
        if prev_f * fx < 0.0:
            a, b, fa = prev_x, float(x), prev_f
            bracket = (a, b)
            for _ in range(200):
                m = 0.5 * (a + b)
                fm = f(m)
                if abs(fm) <= residual_tol:
                    return EpsSolution(eps=m, residual=fm, bracket=bracket)
                if fa * fm < 0.0:
                    b = m
                else:
                    a, fa = m, fm
            m = 0.5 * (a + b)
            return EpsSolution(eps=m, residual=f(m), bracket=bracket)
        prev_x, prev_f = float(x), fx
    raise NoRootInRange(
        f"sin(omega*eps) = {rhs_offset:.6g} + {rhs_slope:.6g}*eps has no root "
        f"in [0, {hi:.6g}]")


def _try_eps(rhs_slope, rhs_offset, omega_star, t0) -> Optional[float]:
    try:
        return solve_eps(rhs_slope, rhs_offset, omega_star, t0).eps
    except NoRootInRange:
        return None


# ---------------------------------------------------------------------------
# shared parameter plumbing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Params:
    c: float
    rho: float
    S_t: float
    P_t: float
    tau0: float
    P0: float
    t0: float
    omega: float
    L: float
    F_tp: float          # tau0 * P_t * L (full embedment)
    beta: float          # tau0 * P_t * c / (2 P0)  [1/s]
    imp: float           # cρS_t, impedance-like normalization


def _params(pipe: PipeSpec, friction: FrictionSpec, pulse: Pulse,
            expect: Tuple[PulseShape, ...]) -> _Params:
    if pulse.shape not in expect:
        names = "/".join(s.value for s in expect)
        raise RegimeError(f"operation requires a {names} pulse, "
                          f"got {pulse.shape.value}")
    d = derive_properties(pipe, friction)
    t0 = pulse.t0 if pulse.t0 is not None else math.pi / pulse.omega_star
    beta = friction.tau0 * d.P_t * d.c / (2.0 * pulse.P0)
    return _Params(c=d.c, rho=pipe.rho, S_t=d.S_t, P_t=d.P_t,
                   tau0=friction.tau0, P0=pulse.P0, t0=t0,
                   omega=pulse.omega_star, L=pipe.L,
                   F_tp=friction.tau0 * d.P_t * pipe.L, beta=beta,
                   imp=d.c * pipe.rho * d.S_t)


def _guard_regime(p: _Params):
    # beyond t0 = t_star the sliding direction reverses and these forms
    # do not apply
    t_star = math.inf if p.beta == 0 else 1.0 / p.beta
    if p.t0 > t_star:
        raise RegimeError(
            f"pulse duration {p.t0:.6g} s exceeds the decay time "
            f"{t_star:.6g} s; the fixed-sliding-direction solutions do not "
            "apply in the velocity-reversal regime")


def _require_fully_embedded(pipe: PipeSpec, friction: FrictionSpec):
    lo, hi = friction.active_interval
    tol = 1e-9 * max(pipe.L, 1.0)
    if lo > tol or hi < pipe.L - tol:
        raise RegimeError(
            "reflection formulas assume friction along the entire pipe; "
            f"active interval is ({lo}, {hi}) on a pipe of length {pipe.L}")


# ---------------------------------------------------------------------------
# semi-infinite pipe, half-sine load
# ---------------------------------------------------------------------------

def decay_estimates(pipe: PipeSpec, friction: FrictionSpec,
                    pulse: Pulse) -> DecayEstimates:
    """Time at which the running pulse amplitude is fully consumed, and the
    depth beyond which the pipe is never disturbed.

    t_star = 2 P0 / (tau0 P_t c),  z_star = c (t_star - t0 / 2); both
    infinite in the frictionless limit.  For a continuous sine the
    half-period pi/omega plays the role of t0.
    """
    p = _params(pipe, friction, pulse,
                (PulseShape.SEMI_SINE, PulseShape.CONTINUOUS_SINE))
    if p.tau0 == 0.0:
        return DecayEstimates(t_star=math.inf, z_star=math.inf)
    t_star = 2.0 * p.P0 / (p.tau0 * p.P_t * p.c)
    return DecayEstimates(t_star=t_star, z_star=p.c * (t_star - 0.5 * p.t0))


def reach_threshold(pipe: PipeSpec, friction: FrictionSpec,
                    pulse: Pulse) -> ReachThreshold:
    """Minimum amplitude for the disturbance to reach the far end z = L.

    threshold = (L + c t0/2) tau0 P_t / 2; for L >> c t0 / 2 this tends to
    half the total side friction force.
    """
    p = _params(pipe, friction, pulse, (PulseShape.SEMI_SINE,))
    thr = (p.L + p.c * p.t0 / 2.0) * p.tau0 * p.P_t / 2.0
    return ReachThreshold(threshold=thr, reached=p.P0 >= thr,
                          simplified=p.F_tp / 2.0)


def velocity_semi_infinite(z: ArrayLike, t: ArrayLike, pipe: PipeSpec,
                           friction: FrictionSpec, pulse: Pulse) -> ArrayLike:
    """Velocity of the running half-sine pulse in a semi-infinite pipe.

    (P0 sin omega(t - z/c) - tau0 P_t c t / 2) / (c rho S_t) wherever the
    force part exceeds the friction level inside the pulse support, zero
    elsewhere.  The support test is exactly equivalent to the eroded
    window between the transcendental offsets.  Vectorized over z or t.
    """
    p = _params(pipe, friction, pulse, (PulseShape.SEMI_SINE,))
    _guard_regime(p)
    z_a, t_a = np.asarray(z, dtype=float), np.asarray(t, dtype=float)
    s = t_a - z_a / p.c
    cut = p.tau0 * p.P_t * p.c * t_a / 2.0
    force = p.P0 * np.sin(p.omega * np.clip(s, 0.0, p.t0))
    alive = (s >= 0.0) & (s <= p.t0) & (force >= cut)
    out = np.where(alive, (force - cut) / p.imp, 0.0)
    if np.isscalar(z) and np.isscalar(t):
        return float(out)
    return out


def _eps_pair_semi(p: _Params, z: float) -> Optional[Tuple[float, float]]:
    e1 = _try_eps(p.beta, p.beta * z / p.c, p.omega, p.t0)
    e2 = _try_eps(-p.beta, p.beta * (z / p.c + p.t0), p.omega, p.t0)
    if e1 is None or e2 is None:
        return None
    return e1, e2


def displacement_semi_infinite(z: ArrayLike, t: ArrayLike, pipe: PipeSpec,
                               friction: FrictionSpec,
                               pulse: Pulse) -> ArrayLike:
    """Displacement of the half-sine pulse in a semi-infinite pipe.

    Time integral of the eroded-window velocity: zero before the (eroded)
    arrival, a growing branch while the window passes, and the residual
    slip once it has passed.  Vectorized over z or t (not both).
    """
    p = _params(pipe, friction, pulse, (PulseShape.SEMI_SINE,))
    _guard_regime(p)
    if not np.isscalar(z) and np.ndim(z) > 0:
        zs = np.asarray(z, dtype=float)
        return np.array([_disp_semi_scalar_z(p, zi, t) for zi in zs])
    out = _disp_semi_scalar_z(p, float(z), t)
    return out


def _disp_semi_scalar_z(p: _Params, z: float, t: ArrayLike) -> ArrayLike:
    pair = _eps_pair_semi(p, z)
    t_a = np.asarray(t, dtype=float)
    if pair is None:
        out = np.zeros_like(t_a)
        return float(out) if np.isscalar(t) else out
    e1, e2 = pair
    s = t_a - z / p.c
    quad = p.tau0 * p.P_t * p.c / 4.0
    arr = z / p.c + e1
    dep = z / p.c + p.t0 - e2
    mid = (p.P0 / p.omega * (math.cos(p.omega * e1)
                             - np.cos(p.omega * np.clip(s, 0.0, p.t0)))
           - quad * (t_a ** 2 - arr ** 2))
    after = (p.P0 / p.omega * (math.cos(p.omega * e1) + math.cos(p.omega * e2))
             - quad * (dep ** 2 - arr ** 2))
    out = np.where(s < e1, 0.0, np.where(s > p.t0 - e2, after, mid)) / p.imp
    return float(out) if np.isscalar(t) else out


def velocity_generic_pulse(z: ArrayLike, t: ArrayLike, pipe: PipeSpec,
                           friction: FrictionSpec, pulse: Pulse) -> ArrayLike:
    """Velocity under an arbitrary convex pulse profile (semi-infinite pipe).

    The erosion offsets solve 2 P0 Qn(eps1) = tau0 P_t (z + c eps1) and
    2 P0 Qn(t0 - eps2) = tau0 P_t (z + c t0 - c eps2), where Qn is the
    normalized profile; an offset is zero when the corresponding pulse
    edge is still above the friction level at this depth.  For a
    rectangular profile both offsets vanish.  Accuracy improves as
    t0 / t_star shrinks.
    """
    p = _params(pipe, friction, pulse,
                (PulseShape.CUSTOM, PulseShape.SEMI_SINE, PulseShape.RECT))
    _guard_regime(p)
    prof = _norm_profile(pulse)
    if not np.isscalar(z) and np.ndim(z) > 0:
        return np.array([_vel_generic_scalar_z(p, prof, zi, t)
                         for zi in np.asarray(z, dtype=float)])
    return _vel_generic_scalar_z(p, prof, float(z), t)


def _norm_profile(pulse: Pulse):
    if pulse.shape is PulseShape.SEMI_SINE:
        w = pulse.omega_star
        return lambda s: math.sin(w * s)
    if pulse.shape is PulseShape.RECT:
        return lambda s: 1.0
    return pulse.profile


def _profile_edge_eps(p: _Params, prof, z: float, trailing: bool,
                      n_scan: int = 512) -> Optional[float]:
    # root of 2 P0 Qn(edge) = tau0 P_t (z + c * arg) on [0, t0/2];
    # zero when the edge is already above the friction line
    def g(e: float) -> float:
        if trailing:
            return (2.0 * p.P0 * prof(p.t0 - e)
                    - p.tau0 * p.P_t * (z + p.c * p.t0 - p.c * e))
        return 2.0 * p.P0 * prof(e) - p.tau0 * p.P_t * (z + p.c * e)

    if g(0.0) >= 0.0:
        return 0.0
    hi = 0.5 * p.t0
    xs = np.linspace(0.0, hi, n_scan + 1)
    prev_x, prev_f = 0.0, g(0.0)
    for x in xs[1:]:
        fx = g(float(x))
        if prev_f * fx <= 0.0:
            a, b, fa = prev_x, float(x), prev_f
            for _ in range(200):
                m = 0.5 * (a + b)
                fm = g(m)
                if fa * fm <= 0.0:
                    b = m
                else:
                    a, fa = m, fm
                if b - a < 1e-16 * p.t0:
                    break
            return 0.5 * (a + b)
        prev_x, prev_f = float(x), fx
    return None


def _vel_generic_scalar_z(p: _Params, prof, z: float, t: ArrayLike) -> ArrayLike:
    e1 = _profile_edge_eps(p, prof, z, trailing=False)
    e2 = _profile_edge_eps(p, prof, z, trailing=True)
    t_a = np.asarray(t, dtype=float)
    if e1 is None or e2 is None:
        out = np.zeros_like(t_a)
        return float(out) if np.isscalar(t) else out
    s = t_a - z / p.c
    inside = (s >= e1) & (s <= p.t0 - e2)
    qvals = np.array([prof(float(si)) if e1 <= si <= p.t0 - e2 else 0.0
                      for si in np.atleast_1d(s)]).reshape(s.shape)
    val = (p.P0 * qvals - p.tau0 * p.P_t * p.c * t_a / 2.0) / p.imp
    out = np.where(inside, val, 0.0)
    return float(out) if np.isscalar(t) else out


def peak_velocity_profile(z: ArrayLike, pipe: PipeSpec, friction: FrictionSpec,
                          pulse: Pulse) -> ArrayLike:
    """Maximum-over-time velocity at depth z for the half-sine load.

    The crest passes z at t = z/c + t0/2 carrying
    (P0 - tau0 P_t c t / 2) / (c rho S_t); clipped at zero beyond the
    quiet-zone depth.
    """
    p = _params(pipe, friction, pulse, (PulseShape.SEMI_SINE,))
    _guard_regime(p)
    z_a = np.asarray(z, dtype=float)
    t_peak = z_a / p.c + 0.5 * p.t0
    val = (p.P0 - p.tau0 * p.P_t * p.c * t_peak / 2.0) / p.imp
    out = np.clip(val, 0.0, None)
    return float(out) if np.isscalar(z) else out


# ---------------------------------------------------------------------------
# finite pipe, reflections
# ---------------------------------------------------------------------------

def _transit_window(p: _Params, travel: float
                    ) -> Optional[Tuple[float, float, float, float]]:
    """Erosion offsets and window edges for a path of length ``travel``."""
    T = travel / p.c
    lead = _try_eps(p.beta, p.beta * T, p.omega, p.t0)
    trail = _try_eps(-p.beta, p.beta * (T + p.t0), p.omega, p.t0)
    if lead is None or trail is None:
        return None
    return lead, trail, T + lead, T + p.t0 - trail   # eps1, eps2, start, end


def finite_rod_windows(z: float, pipe: PipeSpec, friction: FrictionSpec,
                       pulse: Pulse) -> List[ReflectionWindow]:
    """Survival windows of all end-to-end transits observed at depth z.

    Transit n arrives twice: directly after n full round trips (path
    2Ln + z) and once more after reflecting off the far end (path
    2L(n+1) - z).  The window counts follow the amplitude budget
    n1 = floor(P0/F_tp - z/2L), n2 = floor(P0/F_tp + z/2L - 1).
    """
    p = _params(pipe, friction, pulse, (PulseShape.SEMI_SINE,))
    _guard_regime(p)
    _require_fully_embedded(pipe, friction)
    ratio = p.P0 / p.F_tp
    n1 = math.floor(ratio - z / (2.0 * p.L))
    n2 = math.floor(ratio + z / (2.0 * p.L) - 1.0)
    windows: List[ReflectionWindow] = []
    for n in range(0, max(n1, n2) + 1):
        fields = {}
        if n <= n1:
            wa = _transit_window(p, 2.0 * p.L * n + z)
            if wa is not None:
                fields.update(eps11=wa[0], eps12=wa[1], a2=wa[2], a1=wa[3])
        if n <= n2:
            wb = _transit_window(p, 2.0 * p.L * (n + 1) - z)
            if wb is not None:
                fields.update(eps21=wb[0], eps22=wb[1], b2=wb[2], b1=wb[3])
        if fields:
            windows.append(ReflectionWindow(n=n, **fields))
    return windows


def velocity_finite_rod(z: float, t: ArrayLike, pipe: PipeSpec,
                        friction: FrictionSpec, pulse: Pulse,
                        windows: Optional[List[ReflectionWindow]] = None,
                        ) -> ArrayLike:
    """Velocity at depth z in a fully embedded finite pipe (half-sine load).

    Each surviving transit window contributes
    (P0 sin omega(t - T) - F_tp c t / 2L) / (c rho S_t) between its eroded
    edges; free-end reflections preserve the velocity sign so contributions
    add.  Pass precomputed ``windows`` when evaluating many times at one z.
    """
    p = _params(pipe, friction, pulse, (PulseShape.SEMI_SINE,))
    _guard_regime(p)
    _require_fully_embedded(pipe, friction)
    if windows is None:
        windows = finite_rod_windows(z, pipe, friction, pulse)
    t_a = np.asarray(t, dtype=float)
    out = np.zeros_like(t_a)
    damp = p.F_tp * p.c / (2.0 * p.L)
    for w in windows:
        for eps1, start, end in ((w.eps11, w.a2, w.a1), (w.eps21, w.b2, w.b1)):
            if start is None:
                continue
            T = start - eps1
            mask = (t_a >= start) & (t_a <= end)
            if not np.any(mask):
                continue
            out = out + np.where(
                mask,
                (p.P0 * np.sin(p.omega * (t_a - T)) - damp * t_a) / p.imp,
                0.0)
    return float(out) if np.isscalar(t) else out


def displacement_finite_rod(z: float, t: ArrayLike, pipe: PipeSpec,
                            friction: FrictionSpec, pulse: Pulse,
                            windows: Optional[List[ReflectionWindow]] = None,
                            ) -> ArrayLike:
    """Displacement at depth z in a fully embedded finite pipe.

    Branchwise time integral of the window sums: each window contributes
    nothing before it opens, an oscillatory-plus-quadratic branch while
    open, and its accumulated slip once closed.
    """
    p = _params(pipe, friction, pulse, (PulseShape.SEMI_SINE,))
    _guard_regime(p)
    _require_fully_embedded(pipe, friction)
    if windows is None:
        windows = finite_rod_windows(z, pipe, friction, pulse)
    t_a = np.asarray(t, dtype=float)
    out = np.zeros_like(t_a)
    quad = p.tau0 * p.P_t * p.c / 4.0
    for w in windows:
        for eps1, eps2, start, end in ((w.eps11, w.eps12, w.a2, w.a1),
                                       (w.eps21, w.eps22, w.b2, w.b1)):
            if start is None:
                continue
            T = start - eps1
            c1 = math.cos(p.omega * eps1)
            mid = (p.P0 / p.omega * (c1 - np.cos(p.omega
                                                 * np.clip(t_a - T, 0.0, p.t0)))
                   - quad * (t_a ** 2 - start ** 2))
            after = (p.P0 / p.omega * (c1 + math.cos(p.omega * eps2))
                     - quad * (end ** 2 - start ** 2))
            out = out + np.where(t_a < start, 0.0,
                                 np.where(t_a > end, after, mid)) / p.imp
    return float(out) if np.isscalar(t) else out


# ---------------------------------------------------------------------------
# cumulative slip of the loaded cross-section
# ---------------------------------------------------------------------------

def slip_semi_sine(pipe: PipeSpec, friction: FrictionSpec,
                   pulse: Pulse) -> SlipResult:
    """Cumulative slip at z = 0 after all reflections of a half-sine decay.

    ``exact`` sums the residual slip of every surviving transit window,
    with erosion offsets from the z = 0 specialization of the window
    equations; ``estimate`` replaces the sums by integrals, valid for a
    large window count:

        t0 / (2 c rho S_t F_tp) * { P0^2
            + 2 P0 F_tp (1 + (2/pi)(1 + t0 c / 2L)) - F_tp^2 t0 c / 2L }.
    """
    p = _params(pipe, friction, pulse, (PulseShape.SEMI_SINE,))
    _guard_regime(p)
    _require_fully_embedded(pipe, friction)
    if p.P0 < p.F_tp:
        raise RegimeError(
            f"pulse amplitude {p.P0:.6g} N below the total friction force "
            f"{p.F_tp:.6g} N: no full transit survives")
    n_star = math.floor(p.P0 / p.F_tp)
    r = p.F_tp / p.P0
    quad = p.F_tp * p.c / (4.0 * p.L)
    total = 0.0
    for n in range(n_star + 1):
        e11 = _try_eps(p.beta, r * n, p.omega, p.t0)
        e12 = _try_eps(-p.beta, r * n + p.beta * p.t0, p.omega, p.t0)
        if e11 is None or e12 is None:
            continue
        total += (p.P0 / p.omega * (math.cos(p.omega * e11)
                                    + math.cos(p.omega * e12))
                  - quad * (p.t0 - e11 - e12)
                  * (p.t0 + 4.0 * p.L * n / p.c + e11 - e12))
    for n in range(n_star):
        off = r * (n + 1)
        e21 = _try_eps(p.beta, off, p.omega, p.t0)
        e22 = _try_eps(-p.beta, off + p.beta * p.t0, p.omega, p.t0)
        if e21 is None or e22 is None:
            continue
        total += (p.P0 / p.omega * (math.cos(p.omega * e21)
                                    + math.cos(p.omega * e22))
                  - quad * (p.t0 - e21 - e22)
                  * (p.t0 + 4.0 * p.L * (n + 1) / p.c + e21 - e22))
    exact = total / p.imp
    estimate = (p.t0 / (2.0 * p.imp * p.F_tp)) * (
        p.P0 ** 2
        + 2.0 * p.P0 * p.F_tp * (1.0 + (2.0 / math.pi)
                                 * (1.0 + p.t0 * p.c / (2.0 * p.L)))
        - p.F_tp ** 2 * p.t0 * p.c / (2.0 * p.L))
    return SlipResult(exact=exact, estimate=estimate, n_star=n_star)


def slip_rect(pipe: PipeSpec, friction: FrictionSpec,
              pulse: Pulse) -> SlipResult:
    """Cumulative slip at z = 0 for a rectangular pulse.

    ``exact`` evaluates the window sums in closed form,

        (t0 / (c rho S_t)) * { (P0 - F_tp t0 c / 4L)(1 + 2 m)
                               - F_tp m (m + 1) },   m = floor(P0 / F_tp);

    ``estimate`` is its large-m integral form

        (t0 / (c rho S_t F_tp)) * { (P0 - F_tp t0 c / 4L)^2
                                    - F_tp^2 t0 c / 4L }.
    """
    p = _params(pipe, friction, pulse, (PulseShape.RECT,))
    _require_fully_embedded(pipe, friction)
    if p.P0 < p.F_tp:
        raise RegimeError(
            f"pulse amplitude {p.P0:.6g} N below the total friction force "
            f"{p.F_tp:.6g} N: no full transit survives")
    m = math.floor(p.P0 / p.F_tp)
    head = p.P0 - p.F_tp * p.t0 * p.c / (4.0 * p.L)
    exact = (p.t0 / p.imp) * (head * (1.0 + 2.0 * m)
                              - p.F_tp * m * (m + 1.0))
    estimate = (p.t0 / (p.imp * p.F_tp)) * (
        head ** 2 - p.F_tp ** 2 * p.t0 * p.c / (4.0 * p.L))
    return SlipResult(exact=exact, estimate=estimate, n_star=m)


def velocity_rect_finite(z: float, t: ArrayLike, pipe: PipeSpec,
                         friction: FrictionSpec, pulse: Pulse) -> ArrayLike:
    """Velocity at depth z for a rectangular pulse in a fully embedded pipe.

    Rectangular edges do not erode, so the transit windows are the plain
    arrival intervals; each contributes (P0 - F_tp c t / 2L) / (c rho S_t).
    """
    p = _params(pipe, friction, pulse, (PulseShape.RECT,))
    _require_fully_embedded(pipe, friction)
    t_a = np.asarray(t, dtype=float)
    out = np.zeros_like(t_a)
    damp = p.F_tp * p.c / (2.0 * p.L)
    for start, end in _rect_windows(p, z):
        mask = (t_a >= start) & (t_a <= end)
        out = out + np.where(mask, (p.P0 - damp * t_a) / p.imp, 0.0)
    return float(out) if np.isscalar(t) else out


def displacement_rect_finite(z: float, t: ArrayLike, pipe: PipeSpec,
                             friction: FrictionSpec, pulse: Pulse) -> ArrayLike:
    """Windowwise time integral of :func:`velocity_rect_finite`."""
    p = _params(pipe, friction, pulse, (PulseShape.RECT,))
    _require_fully_embedded(pipe, friction)
    t_a = np.asarray(t, dtype=float)
    out = np.zeros_like(t_a)
    quad = p.F_tp * p.c / (4.0 * p.L)
    for start, end in _rect_windows(p, z):
        upto = np.clip(t_a, start, end)
        out = out + (p.P0 * (upto - start)
                     - quad * (upto ** 2 - start ** 2)) / p.imp
    return float(out) if np.isscalar(t) else out


def _rect_windows(p: _Params, z: float) -> List[Tuple[float, float]]:
    ratio = p.P0 / p.F_tp
    n1 = math.floor(ratio - z / (2.0 * p.L))
    n2 = math.floor(ratio + z / (2.0 * p.L) - 1.0)
    wins = []
    for n in range(0, n1 + 1):
        T = (2.0 * p.L * n + z) / p.c
        wins.append((T, T + p.t0))
    for n in range(0, n2 + 1):
        T = (2.0 * p.L * (n + 1) - z) / p.c
        wins.append((T, T + p.t0))
    return wins


# ---------------------------------------------------------------------------
# continuous sinusoidal load
# ---------------------------------------------------------------------------

def harmonic_solution(z: ArrayLike, t: ArrayLike, pipe: PipeSpec,
                      friction: FrictionSpec, pulse: Pulse,
                      variant: HarmonicVariant = HarmonicVariant.CORRECTED,
                      ) -> ArrayLike:
    """Steady-state displacement under a continuous sinusoidal end load.

    Three approximations of increasing fidelity to the time-stepped
    solution:

    * MECHANICAL_ANALOGUE: amplitude A0 - 2 tau0 P_t z / (pi c w rho S_t),
      sine phase; amplitude correct away from the running front.
    * COMPLEX_AMPLITUDES: amplitude A0 - tau0 P_t z / (2 c w rho S_t),
      sine phase; overshoots away from the source.
    * CORRECTED: amplitude (P0 + tau0 P_t / 2) / (w rho c S_t) with cosine
      phase (the end stress integrates to a cosine displacement) and a
      hard cutoff at the quiet-zone depth.
    """
    p = _params(pipe, friction, pulse, (PulseShape.CONTINUOUS_SINE,))
    w = p.omega
    z_a, t_a = np.asarray(z, dtype=float), np.asarray(t, dtype=float)
    phase = w * t_a - w * z_a / p.c
    if variant is HarmonicVariant.CORRECTED:
        amp = (p.P0 + p.tau0 * p.P_t / 2.0) / (w * p.rho * p.c * p.S_t)
        if p.tau0 == 0.0:
            gate = np.ones_like(z_a)
        else:
            z_star = decay_estimates(pipe, friction, pulse).z_star
            gate = np.where(z_a <= z_star, 1.0, 0.0)
        out = amp * np.cos(phase) * gate
    else:
        first = (math.pi * p.P0 / (2.0 * pipe.E * p.S_t)) ** 2
        second = (p.tau0 * p.P_t / (p.c * w * p.rho * p.S_t)) ** 2
        if second > first:
            raise RegimeError("overdamped regime outside formula validity")
        A0 = (2.0 * p.c / (math.pi * w)) * math.sqrt(first - second)
        if variant is HarmonicVariant.MECHANICAL_ANALOGUE:
            slope = 2.0 * p.tau0 * p.P_t / (math.pi * p.c * w * p.rho * p.S_t)
        else:
            slope = p.tau0 * p.P_t / (2.0 * p.c * w * p.rho * p.S_t)
        out = (A0 - slope * z_a) * np.sin(phase)
    if np.isscalar(z) and np.isscalar(t):
        return float(out)
    return out
