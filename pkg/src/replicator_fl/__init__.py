"""Replicator dynamics for two-population zero-sum games, with a feedback-linearizing controller."""

__version__ = "0.1.0"

from .game import (
    PENALTY_SHOOTOUT,
    MixedStrategy,
    PayoffMatrix,
    SpectralReport,
    ZeroSumGame,
    build_zero_sum,
    classify_definiteness,
    expected_payoff,
    load_matrix,
    payoff_vector,
    spectral_report,
    symmetric_eigenvalues,
    symmetrize,
    zero_sum_residual,
)
from .equilibrium import IndifferenceReport, NashPoint, solve_interior_nash, verify_nash
from .dynamics import (
    ControllerGains,
    JointState,
    SimConfig,
    Trajectory,
    control_inputs,
    controlled_field,
    perturb_equilibrium,
    project_to_simplex,
    replicator_field,
    rk4_step,
    simulate,
)
from .lyapunov import (
    LyapunovSample,
    annotate_trajectory,
    conservation_check,
    kl_divergence,
    payoff_differences,
    quadratic_lyapunov,
    vdot_controlled,
    vdot_uncontrolled,
)
from .export import emit_csv, emit_plot
from .scenarios import Scenario, RunManifest, list_builtin_scenarios, run_scenario
