"""Solvers for verifiable disclosure games driven by posterior means."""

from .prior import (
    IntervalUnion,
    Prior,
    SolverError,
    SpecError,
    ZeroMassError,
    interval,
    plinear_prior,
    solve_h,
    solve_mean_equation,
    uniform_prior,
)
from .game import (
    GameSpec,
    MeanDistribution,
    Outcome,
    cheap_talk_payoff,
    dominance_gap,
    is_mpc,
    unraveling_payoff,
    validate,
    value_at,
)
from .representation import (
    DeterministicRepresentation,
    NestedPair,
    check_prop2,
    feasible_bipool,
    induced_distribution,
    is_incentive_compatible,
    is_laminar,
    is_obedient,
    nested_interval_rep,
    representation_payoff,
)
from .design import (
    BiPoolingSolution,
    Segment,
    canonicalize,
    commitment_payoff,
    commitment_solution,
    lp_value,
    solve_lp,
    solve_three_action,
    solve_two_action,
)
from .equilibrium import (
    ImplementabilityReport,
    OREAudit,
    OREResult,
    check_c3i,
    check_cni,
    check_nam,
    implementable,
    ore_at_payoff,
    payoff_bounds,
    preferred_ore,
    sweep_representation,
    verify_ore,
)
from .apps import (
    PrudenceReport,
    SellerModel,
    SweepResult,
    SweepRow,
    Voter,
    VotingModel,
    check_prudence,
    seller_to_game,
    voting_comparative_statics,
    voting_to_game,
)

__version__ = "0.1.0"

__all__ = [
    "BiPoolingSolution",
    "DeterministicRepresentation",
    "GameSpec",
    "ImplementabilityReport",
    "IntervalUnion",
    "MeanDistribution",
    "NestedPair",
    "OREAudit",
    "OREResult",
    "Outcome",
    "Prior",
    "PrudenceReport",
    "Segment",
    "SellerModel",
    "SolverError",
    "SpecError",
    "SweepResult",
    "SweepRow",
    "Voter",
    "VotingModel",
    "ZeroMassError",
    "canonicalize",
    "check_c3i",
    "check_cni",
    "check_nam",
    "check_prop2",
    "check_prudence",
    "cheap_talk_payoff",
    "commitment_payoff",
    "commitment_solution",
    "dominance_gap",
    "feasible_bipool",
    "implementable",
    "induced_distribution",
    "interval",
    "is_incentive_compatible",
    "is_laminar",
    "is_mpc",
    "is_obedient",
    "lp_value",
    "nested_interval_rep",
    "ore_at_payoff",
    "payoff_bounds",
    "plinear_prior",
    "preferred_ore",
    "representation_payoff",
    "seller_to_game",
    "solve_h",
    "solve_lp",
    "solve_mean_equation",
    "solve_three_action",
    "solve_two_action",
    "sweep_representation",
    "uniform_prior",
    "unraveling_payoff",
    "validate",
    "value_at",
    "verify_ore",
    "voting_comparative_statics",
    "voting_to_game",
]
