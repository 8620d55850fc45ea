"""Quantitative comparison of time-stepped output against closed-form oracles.

Error norms are normalized by the oracle's peak magnitude over the compared
window (the fields cross zero, so pointwise relative error is undefined).
Comparisons along a moving pulse optionally exclude a strip around the
support edges, where a sharp analytic cutoff meets the grid-smeared one by
construction.

Velocity comparisons must respect the solver's output convention: the
backward difference (U^n - U^{n-1})/h_t is the exact mean velocity over the
step, so the matching oracle is the oracle displacement differenced over
the same step (:func:`step_averaged_velocity`).  Comparing against the
instantaneous oracle velocity instead measures the half-step sampling
offset of the estimator, which dominates on coarse grids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np


class NotSettledError(RuntimeError):
    """Trailing window still moving; extend t_end to measure final slip."""


@dataclass(frozen=True)
class ComparisonReport:
    l2_rel: float
    linf_rel: float
    linf_location: float     # sample coordinate (z or t) of the worst error
    peak_reference: float    # oracle peak magnitude used for normalization


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of y = coeff * x**exponent in log-log space."""

    coeff: float
    exponent: float
    r_squared: float


def error_norms(numeric: np.ndarray, analytic: np.ndarray,
                axis_values: Optional[np.ndarray] = None,
                mask: Optional[np.ndarray] = None) -> ComparisonReport:
    """Relative L2 and Linf disparity over a shared sample grid.

    ``mask`` selects the compared window (True = compare).  Normalization
    is by the peak |analytic| over that window; an all-zero oracle window
    cannot be normalized and raises ValueError.
    """
    numeric = np.asarray(numeric, dtype=float)
    analytic = np.asarray(analytic, dtype=float)
    if numeric.shape != analytic.shape:
        raise ValueError(f"sample grids differ: {numeric.shape} vs {analytic.shape}")
    if axis_values is None:
        axis_values = np.arange(numeric.size, dtype=float)
    axis_values = np.asarray(axis_values, dtype=float)
    if mask is None:
        mask = np.ones(numeric.shape, dtype=bool)
    if not np.any(mask):
        raise ValueError("empty comparison window")
    diff = np.abs(numeric - analytic)[mask]
    ref = analytic[mask]
    peak = float(np.max(np.abs(ref)))
    if peak == 0.0:
        raise ValueError("oracle window is identically zero; "
                         "cannot normalize error norms")
    iworst = int(np.argmax(diff))
    return ComparisonReport(
        l2_rel=float(np.sqrt(np.sum(diff ** 2) / np.sum(ref ** 2))),
        linf_rel=float(diff[iworst] / peak),
        linf_location=float(axis_values[mask][iworst]),
        peak_reference=peak)


def support_exclusion_mask(axis: np.ndarray, oracle: np.ndarray,
                           width: float) -> np.ndarray:
    """True where a sample is at least ``width`` away from every support edge.

    Edges are located from the oracle's own sampled support (transitions
    between zero and nonzero), so the same helper serves single pulses and
    multi-window reflection sums.
    """
    axis = np.asarray(axis, dtype=float)
    alive = np.abs(np.asarray(oracle, dtype=float)) > 0.0
    keep = np.ones(axis.shape, dtype=bool)
    for i in range(len(alive) - 1):
        if alive[i] != alive[i + 1]:
            edge = 0.5 * (axis[i] + axis[i + 1])
            keep &= np.abs(axis - edge) > width
    return keep


def step_averaged_velocity(displacement_fn: Callable[[np.ndarray, float], np.ndarray],
                           x: np.ndarray, t: float, h_t: float) -> np.ndarray:
    """Oracle velocity matching the solver's backward-difference output."""
    return (np.asarray(displacement_fn(x, t), dtype=float)
            - np.asarray(displacement_fn(x, t - h_t), dtype=float)) / h_t


def velocity_maxima_profile(snapshots: Sequence[Tuple[float, np.ndarray]],
                            ) -> np.ndarray:
    """Per-node maximum |velocity| over a sequence of (t, velocity) profiles.

    The snapshots must be dense enough in time (a small fraction of the
    pulse duration) for the maxima to be trustworthy.
    """
    if not snapshots:
        raise ValueError("no snapshots given")
    out = np.abs(np.asarray(snapshots[0][1], dtype=float)).copy()
    for _, v in snapshots[1:]:
        np.maximum(out, np.abs(np.asarray(v, dtype=float)), out=out)
    return out


def fit_power_law(x: Sequence[float], y: Sequence[float]) -> PowerLawFit:
    """Fit y = a x^b by least squares on (ln x, ln y).

    Requires at least three strictly positive samples on each axis.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise ValueError("x and y lengths differ")
    if x.size < 3:
        raise ValueError(f"power-law fit needs >= 3 samples, got {x.size}")
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise ValueError("power-law fit requires strictly positive samples")
    lx, ly = np.log(x), np.log(y)
    A = np.column_stack([lx, np.ones_like(lx)])
    (b, ln_a), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - (b * lx + ln_a)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return PowerLawFit(coeff=float(math.exp(ln_a)), exponent=float(b),
                       r_squared=min(max(r2, 0.0), 1.0))


def final_slip(t: np.ndarray, displacement: np.ndarray, velocity: np.ndarray,
               settle_fraction: float = 0.1,
               settle_ratio: float = 1e-4) -> float:
    """Settled displacement of a probe series (mean over the trailing window).

    The trailing ``settle_fraction`` of the series must be quiet:
    max |velocity| below ``settle_ratio`` times the series' peak |velocity|.
    Raises :class:`NotSettledError` otherwise (frictionless or barely
    damped configurations never settle; extend t_end or accept the
    trailing mean explicitly).
    """
    t = np.asarray(t, dtype=float)
    displacement = np.asarray(displacement, dtype=float)
    velocity = np.asarray(velocity, dtype=float)
    if t.size == 0:
        raise ValueError("empty series")
    n_tail = max(1, int(math.ceil(settle_fraction * t.size)))
    peak = float(np.max(np.abs(velocity)))
    tail_peak = float(np.max(np.abs(velocity[-n_tail:])))
    if peak > 0.0 and tail_peak > settle_ratio * peak:
        raise NotSettledError(
            f"trailing max |velocity| {tail_peak:.3e} m/s exceeds "
            f"{settle_ratio:g} x peak ({settle_ratio * peak:.3e} m/s); "
            "increase t_end")
    return float(np.mean(displacement[-n_tail:]))


def trailing_mean(displacement: np.ndarray, settle_fraction: float = 0.1,
                  ) -> float:
    """Mean displacement over the trailing window, without the settle gate."""
    displacement = np.asarray(displacement, dtype=float)
    n_tail = max(1, int(math.ceil(settle_fraction * displacement.size)))
    return float(np.mean(displacement[-n_tail:]))


def profile_envelope(z: np.ndarray, u: np.ndarray, band: float,
                     centers: Sequence[float]) -> List[float]:
    """Peak |u| within a band of width ``band`` around each center."""
    z = np.asarray(z, dtype=float)
    u = np.asarray(u, dtype=float)
    out = []
    for c0 in centers:
        m = (z >= c0 - band / 2.0) & (z <= c0 + band / 2.0)
        out.append(float(np.max(np.abs(u[m]))) if np.any(m) else 0.0)
    return out
