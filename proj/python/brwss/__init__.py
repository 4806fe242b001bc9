"""Passage-time predictions and simulation for a branching random walk on the b-ary hypercube."""

from ._core import (
    ModelParams,
    RootResult,
    RegimeConstants,
    Prediction,
    EnsembleResult,
    ballot_exact,
    ballot_mc,
    expected_particles_log,
    lambert_w0,
    log_sphere_size,
    mutation_delay_coefficient,
    predict_fast,
    predict_slow,
    regime_constants,
    run_cli,
    simulate,
    solve_first_moment,
    transition_log_prob,
    __version__,
)

__all__ = [
    "ModelParams",
    "RootResult",
    "RegimeConstants",
    "Prediction",
    "EnsembleResult",
    "ballot_exact",
    "ballot_mc",
    "expected_particles_log",
    "lambert_w0",
    "log_sphere_size",
    "mutation_delay_coefficient",
    "predict_fast",
    "predict_slow",
    "regime_constants",
    "run_cli",
    "simulate",
    "solve_first_moment",
    "transition_log_prob",
]
