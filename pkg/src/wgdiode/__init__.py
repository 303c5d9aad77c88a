"""Quantum-regime transport simulator for a two-atom waveguide diode.

Two two-level emitters coupled to a one-dimensional waveguide form a
passive optical rectifier.  This package computes its transmittance,
reflectivity, rectification efficiency and atomic excitation
probabilities for single-photon and coherent square-pulse inputs, plus
the parameter sweeps needed to map the working regime.
"""

__version__ = "0.1.0"

from .scenario import (
    AtomParams,
    DiodeConfig,
    Direction,
    DriveConfig,
    ValidatedScenario,
    ValidationError,
    mirror,
    validate,
)
from .coherent import (
    CorrelatorState,
    ExcitationRow,
    LinearSystem,
    SolverError,
    Trajectory,
    TransportResult,
    assemble_system,
    autonomy_residual,
    excitation_curves,
    integrate_transient,
    reflected_flux_fraction,
    steady_state,
    transport,
)
from .singlephoton import (
    AmplitudeTrajectory,
    ReflectivityRecord,
    integrate_amplitudes,
    reflectivity_closed_form,
    reflectivity_numeric,
    single_atom_reflection,
)
from .sweep import (
    SweepGrid,
    SweepRow,
    SweepTable,
    efficiency,
    evaluate_point,
    gamma_ratio_scan,
    run_sweep,
    sweep_map,
    sweep_power,
)

__all__ = [
    "AtomParams",
    "DiodeConfig",
    "Direction",
    "DriveConfig",
    "ValidatedScenario",
    "ValidationError",
    "mirror",
    "validate",
    "CorrelatorState",
    "ExcitationRow",
    "LinearSystem",
    "SolverError",
    "Trajectory",
    "TransportResult",
    "assemble_system",
    "autonomy_residual",
    "excitation_curves",
    "integrate_transient",
    "reflected_flux_fraction",
    "steady_state",
    "transport",
    "AmplitudeTrajectory",
    "ReflectivityRecord",
    "integrate_amplitudes",
    "reflectivity_closed_form",
    "reflectivity_numeric",
    "single_atom_reflection",
    "SweepGrid",
    "SweepRow",
    "SweepTable",
    "efficiency",
    "evaluate_point",
    "gamma_ratio_scan",
    "run_sweep",
    "sweep_map",
    "sweep_power",
    "__version__",
]
