"""End-load pulse shapes and their evaluation.

The driving force Q(t) applied to the impacted pipe end.  Supported shapes:

* ``SEMI_SINE`` -- half-period sine of amplitude P0 and duration t0,
  Q(t) = P0 sin(pi t / t0) for 0 <= t <= t0, zero outside.
* ``RECT`` -- constant P0 on [0, t0], zero outside.
* ``CONTINUOUS_SINE`` -- P0 sin(omega t) for all t >= 0 (no cutoff).
* ``CUSTOM`` -- P0 * profile(t) on [0, t0] with profile values in [0, 1].

The step convention at the support boundaries is "on": Q(0) and Q(t0) are
evaluated inside the support, so a pulse is live at t = 0 and t = t0 exactly.

All quantities are SI (N, s).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional


class PulseShape(enum.Enum):
    SEMI_SINE = "semi_sine"
    RECT = "rect"
    CONTINUOUS_SINE = "continuous_sine"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Pulse:
    """End load Q(t).

    Parameters
    ----------
    shape : PulseShape
    P0 : float
        Amplitude [N], > 0.
    t0 : float, optional
        Duration [s]; required for finite shapes, ignored for
        CONTINUOUS_SINE.
    omega_star : float, optional
        Angular frequency [rad/s].  For SEMI_SINE it is pi/t0 and is
        derived automatically; for CONTINUOUS_SINE it must be given.
    profile : callable, optional
        Normalized profile on [0, t0] with values in [0, 1]; required
        for CUSTOM.
    """

    shape: PulseShape
    P0: float
    t0: Optional[float] = None
    omega_star: Optional[float] = None
    profile: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.P0 <= 0:
            raise ValueError(f"pulse.P0 must be positive, got {self.P0}")
        if self.shape is PulseShape.CONTINUOUS_SINE:
            if self.omega_star is None or self.omega_star <= 0:
                raise ValueError("continuous sine requires omega_star > 0")
        else:
            if self.t0 is None or self.t0 <= 0:
                raise ValueError(f"pulse.t0 must be positive, got {self.t0}")
            if self.shape is PulseShape.CUSTOM and self.profile is None:
                raise ValueError("custom pulse requires a profile callable")
            if self.omega_star is None:
                object.__setattr__(self, "omega_star", math.pi / self.t0)
        if self.shape is PulseShape.SEMI_SINE:
            # pinned relation for the half-sine: omega_star = pi / t0
            object.__setattr__(self, "omega_star", math.pi / self.t0)


def semi_sine(P0: float, t0: float) -> Pulse:
    return Pulse(PulseShape.SEMI_SINE, P0=P0, t0=t0)


def rect(P0: float, t0: float) -> Pulse:
    return Pulse(PulseShape.RECT, P0=P0, t0=t0)


def continuous_sine(P0: float, omega_star: float) -> Pulse:
    return Pulse(PulseShape.CONTINUOUS_SINE, P0=P0, omega_star=omega_star)


def custom(P0: float, t0: float, profile: Callable[[float], float]) -> Pulse:
    return Pulse(PulseShape.CUSTOM, P0=P0, t0=t0, profile=profile)


def eval_pulse(pulse: Pulse, t: float) -> float:
    """Force Q(t) [N] at time t [s]; zero for t < 0."""
    if pulse.shape is PulseShape.CONTINUOUS_SINE:
        return pulse.P0 * math.sin(pulse.omega_star * t) if t >= 0.0 else 0.0
    if t < 0.0 or t > pulse.t0:
        return 0.0
    if pulse.shape is PulseShape.SEMI_SINE:
        return pulse.P0 * math.sin(pulse.omega_star * t)
    if pulse.shape is PulseShape.RECT:
        return pulse.P0
    return pulse.P0 * pulse.profile(t)


def pulse_impulse(pulse: Pulse, t_a: float, t_b: float) -> float:
    """Exact integral of Q over [t_a, t_b] [N s].

    Closed form for the analytic shapes; 4-point Gauss-Legendre per
    clipped interval for CUSTOM (exact enough for smooth profiles).
    """
    if t_b <= t_a:
        return 0.0
    if pulse.shape is PulseShape.CONTINUOUS_SINE:
        a, b = max(t_a, 0.0), t_b
        if b <= a:
            return 0.0
        w = pulse.omega_star
        return pulse.P0 * (math.cos(w * a) - math.cos(w * b)) / w
    a, b = max(t_a, 0.0), min(t_b, pulse.t0)
    if b <= a:
        return 0.0
    if pulse.shape is PulseShape.SEMI_SINE:
        w = pulse.omega_star
        return pulse.P0 * (math.cos(w * a) - math.cos(w * b)) / w
    if pulse.shape is PulseShape.RECT:
        return pulse.P0 * (b - a)
    # composite Gauss-Legendre; panels keep kinked profiles accurate
    nodes = (-0.8611363115940526, -0.3399810435848563,
             0.3399810435848563, 0.8611363115940526)
    weights = (0.3478548451374538, 0.6521451548625461,
               0.6521451548625461, 0.3478548451374538)
    n_panels = max(1, min(64, int(math.ceil(64 * (b - a) / pulse.t0))))
    edges = [a + (b - a) * i / n_panels for i in range(n_panels + 1)]
    total = 0.0
    for pa, pb in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (pa + pb), 0.5 * (pb - pa)
        total += half * sum(w * pulse.profile(mid + half * x)
                            for x, w in zip(nodes, weights))
    return pulse.P0 * total


def step_averaged_load(pulse: Pulse, t: float, h_t: float) -> float:
    """Load sample fed to the solver for the update centred at time t.

    The average of Q over [t - h_t, t + h_t]; feeding the averaged value
    instead of the point sample makes the discrete boundary impulse exact
    and keeps the pulse onset/cutoff from exciting the grid-scale parasitic
    mode of the three-level scheme.
    """
    return pulse_impulse(pulse, t - h_t, t + h_t) / (2.0 * h_t)


def impact_energy(pulse: Pulse) -> float:
    """Impact-energy bookkeeping integral of Q(t)^2 over the pulse [N^2 s].

    A comparison invariant, not joules: a half-sine of duration t0 gives
    t0 P0^2 / 2, so a rectangular pulse of duration t0/2 and the same
    amplitude carries equal energy.
    """
    if pulse.shape is PulseShape.CONTINUOUS_SINE:
        raise ValueError("impact energy is unbounded for a continuous sine")
    if pulse.shape is PulseShape.SEMI_SINE:
        return pulse.t0 * pulse.P0 ** 2 / 2.0
    if pulse.shape is PulseShape.RECT:
        return pulse.t0 * pulse.P0 ** 2
    # numeric integral of (P0 * profile)^2 for custom shapes
    n = 2048
    dt = pulse.t0 / n
    acc = 0.0
    for i in range(n):
        tm = (i + 0.5) * dt
        acc += (pulse.P0 * pulse.profile(tm)) ** 2
    return acc * dt
