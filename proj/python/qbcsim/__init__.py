"""Reverse-communication quantum bit-commitment simulator."""

from qbcsim._core import (  # noqa: F401
    Rng,
    StateVector,
    SteeringBasis,
    SteeringInfeasible,
    conceal_closed_form,
    enumerate_oracle,
    epr_pairs_state,
    exclude,
    fidelity,
    measure_in_basis,
    measure_qubit,
    mlc_open_statistics,
    outcome_probabilities,
    parity,
    partial_trace,
    prepare_bb84,
    random_state,
    run_experiment,
    run_round,
    steering_basis,
    tensor,
    trace_distance,
)

__all__ = [
    "Rng",
    "StateVector",
    "SteeringBasis",
    "SteeringInfeasible",
    "conceal_closed_form",
    "enumerate_oracle",
    "epr_pairs_state",
    "exclude",
    "fidelity",
    "measure_in_basis",
    "measure_qubit",
    "mlc_open_statistics",
    "outcome_probabilities",
    "parity",
    "partial_trace",
    "prepare_bb84",
    "random_state",
    "run_experiment",
    "run_round",
    "steering_basis",
    "tensor",
    "trace_distance",
]
