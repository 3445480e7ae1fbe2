"""Energy decay of a beam with boundary springs and dampers."""

from ._core import (
    BeamSpec,
    BoundaryControls,
    CoefficientField,
    DiscreteBeam,
    Error,
    Profile,
    assemble,
    auxiliary_j,
    beta_bounds_constant,
    beta_bounds_general,
    certify,
    decay_table,
    decay_table_reference,
    default_time_step,
    derived_constant_params,
    energy,
    initial_state,
    measured_decay_rate,
    poincare_check,
    run_suite,
    simulate,
    trace_check,
    validate,
)

__all__ = [
    "BeamSpec",
    "BoundaryControls",
    "CoefficientField",
    "DiscreteBeam",
    "Error",
    "Profile",
    "assemble",
    "auxiliary_j",
    "beta_bounds_constant",
    "beta_bounds_general",
    "certify",
    "decay_table",
    "decay_table_reference",
    "default_time_step",
    "derived_constant_params",
    "energy",
    "initial_state",
    "measured_decay_rate",
    "poincare_check",
    "run_suite",
    "simulate",
    "trace_check",
    "validate",
]
