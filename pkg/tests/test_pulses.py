"""Pulse evaluation, impulse integrals, and the impact-energy invariant."""

import math

import numpy as np
import pytest

from pipewave import (continuous_sine, custom, eval_pulse, impact_energy,
                      pulse_impulse, rect, semi_sine)


def test_semi_sine_peak_and_cutoff():
    p = semi_sine(989.6e3, 0.25e-3)
    assert eval_pulse(p, 0.125e-3) == pytest.approx(989.6e3, rel=1e-12)
    assert eval_pulse(p, 0.3e-3) == 0.0
    assert eval_pulse(p, -1e-6) == 0.0
    # support is closed: live at both endpoints
    assert eval_pulse(p, 0.0) == 0.0  # sin(0) = 0 even though the gate is on
    assert eval_pulse(p, 0.25e-3) == pytest.approx(0.0, abs=1e-9)


def test_rect_evaluation():
    p = rect(88e3, 0.11e-3)
    assert eval_pulse(p, 0.05e-3) == 88e3
    assert eval_pulse(p, 0.0) == 88e3
    assert eval_pulse(p, 0.11e-3) == 88e3
    assert eval_pulse(p, 0.111e-3) == 0.0


def test_continuous_sine_runs_forever():
    p = continuous_sine(1e5, 3141.59)
    assert eval_pulse(p, 10.0) == pytest.approx(1e5 * math.sin(3141.59 * 10.0))


def test_semi_sine_nonnegative_inside_support():
    p = semi_sine(1.0, 1e-3)
    ts = np.linspace(0, 1e-3, 101)
    assert all(eval_pulse(p, t) >= 0 for t in ts)


def test_impulse_matches_quadrature():
    p = semi_sine(989.6e3, 0.25e-3)
    ts = np.linspace(-0.05e-3, 0.3e-3, 7)
    for a, b in zip(ts[:-1], ts[1:]):
        grid = np.linspace(a, b, 20001)
        ref = np.trapezoid([eval_pulse(p, t) for t in grid], grid)
        assert pulse_impulse(p, a, b) == pytest.approx(ref, abs=1e-6 * p.P0 * p.t0)


def test_impact_energy_values():
    e = impact_energy(semi_sine(989.6e3, 2.5e-4))
    assert e == pytest.approx(2.5e-4 * 989.6e3 ** 2 / 2, rel=1e-14)
    assert e == pytest.approx(1.2243e8, rel=2e-4)
    assert impact_energy(rect(88e3, 1.1e-4)) == pytest.approx(8.518e5, rel=1e-3)


def test_impact_energy_equal_energy_construction():
    # half-sine of duration t0 and rectangle of duration t0/2, same amplitude
    t0 = 0.22e-3
    assert impact_energy(semi_sine(88e3, t0)) == pytest.approx(
        impact_energy(rect(88e3, t0 / 2)), rel=1e-12)


def test_impact_energy_vanishes_with_amplitude():
    assert impact_energy(semi_sine(1e-30, 2.5e-4)) == pytest.approx(0.0)


def test_impact_energy_rejects_continuous():
    with pytest.raises(ValueError):
        impact_energy(continuous_sine(1e5, 3141.59))


def test_custom_profile():
    p = custom(2.0, 1.0, lambda s: 1.0 - abs(2 * s - 1.0))
    assert eval_pulse(p, 0.5) == pytest.approx(2.0)
    assert eval_pulse(p, 0.25) == pytest.approx(1.0)
    assert pulse_impulse(p, 0.0, 1.0) == pytest.approx(1.0, rel=1e-6)
    assert impact_energy(p) == pytest.approx(4.0 / 3.0, rel=1e-5)


def test_invalid_pulse_parameters():
    with pytest.raises(ValueError):
        semi_sine(-1.0, 1e-3)
    with pytest.raises(ValueError):
        semi_sine(1.0, 0.0)
    with pytest.raises(ValueError):
        continuous_sine(1.0, -5.0)
