"""Longitudinal wave propagation in an elastic pipe with dry side friction.

Library layout:

* :mod:`pipewave.model` -- pipe/friction/grid records and validation
* :mod:`pipewave.pulses` -- end-load shapes
* :mod:`pipewave.fd_solver` -- explicit cross-scheme time stepping with
  per-node friction sign resolution
* :mod:`pipewave.analytic` -- closed-form estimates (running pulse, decay,
  reflections, cumulative slip, harmonic load)
* :mod:`pipewave.compare` -- error norms, power-law fits, slip extraction
* :mod:`pipewave.config` / :mod:`pipewave.cli` -- configuration files and
  the command-line front end
"""

__version__ = "0.1.0"

from .model import (DerivedProps, FrictionSpec, GridSpec, PipeSpec,
                    default_active_interval, derive_properties,
                    friction_for_pipe, grid_for_pipe, validate_config)
from .pulses import (Pulse, PulseShape, continuous_sine, custom, eval_pulse,
                     impact_energy, pulse_impulse, rect, semi_sine,
                     step_averaged_load)
from .fd_solver import (FrictionResolution, InstabilityError, ProbeSeries,
                        SimulationResult, Snapshot, SolverContext,
                        ValidationError, WaveField, apply_boundaries,
                        initial_field, make_context, resolve_friction, run,
                        step)
from .analytic import (DecayEstimates, EpsSolution, HarmonicVariant,
                       NoRootInRange, ReachThreshold, ReflectionWindow,
                       RegimeError, SlipResult, decay_estimates,
                       displacement_finite_rod, displacement_rect_finite,
                       displacement_semi_infinite, finite_rod_windows,
                       harmonic_solution, peak_velocity_profile,
                       reach_threshold, slip_rect, slip_semi_sine, solve_eps,
                       velocity_finite_rod, velocity_generic_pulse,
                       velocity_rect_finite, velocity_semi_infinite)
from .compare import (ComparisonReport, NotSettledError, PowerLawFit,
                      error_norms, final_slip, fit_power_law,
                      profile_envelope, step_averaged_velocity,
                      support_exclusion_mask, trailing_mean,
                      velocity_maxima_profile)
from .config import (ConfigError, OutputSpec, RunConfig, SweepSpec,
                     apply_sweep_value, parse_config, run_simulation,
                     serialize_config)

__all__ = [name for name in dir() if not name.startswith("_")]
