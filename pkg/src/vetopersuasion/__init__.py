"""Solvers for optimal proposals and information design in veto bargaining."""

from .accept import (
    BinaryTypeEnv,
    accepts_quadratic,
    best_acceptable_proposal,
    phi_threshold,
    psi_cap,
    three_type_best_proposal,
    vetoer_value,
)
from .dist import (
    ExponentialTilt,
    FiniteAtoms,
    TypeDistribution,
    UniformInterval,
    from_literal as dist_from_literal,
    lr_tilt,
)
from .errors import (
    AssumptionViolatedError,
    DegenerateGridError,
    DomainError,
    FullMassBelowError,
    NoRootError,
    SingularityError,
    UnsupportedCombinationError,
    VetoPersuasionError,
)
from .lsolve import (
    BinarySolveOutcome,
    Envelope,
    ThreeTypeValues,
    concavify,
    quasiconvexity_check,
    solve_persuasion_first_binary,
    solve_proposal_first_binary,
    three_type_values,
    uhat,
    utilde,
)
from .prefs import (
    Exponential,
    Linear,
    Power,
    ProposerPreferences,
    VetoerLoss,
    from_literal as prefs_from_literal,
)
from .qsolve import (
    Experiment,
    Regime,
    SolveOutcome,
    full_info_optimal,
    indirect_u,
    no_info_optimal,
    payoff_of_experiment,
    solve_cutoff,
    solve_persuasion_first,
    solve_proposal_first,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionViolatedError",
    "BinarySolveOutcome",
    "BinaryTypeEnv",
    "DegenerateGridError",
    "DomainError",
    "Envelope",
    "Experiment",
    "Exponential",
    "ExponentialTilt",
    "FiniteAtoms",
    "FullMassBelowError",
    "Linear",
    "NoRootError",
    "Power",
    "ProposerPreferences",
    "Regime",
    "SingularityError",
    "SolveOutcome",
    "ThreeTypeValues",
    "TypeDistribution",
    "UniformInterval",
    "UnsupportedCombinationError",
    "VetoPersuasionError",
    "VetoerLoss",
    "accepts_quadratic",
    "best_acceptable_proposal",
    "concavify",
    "dist_from_literal",
    "full_info_optimal",
    "indirect_u",
    "lr_tilt",
    "no_info_optimal",
    "payoff_of_experiment",
    "phi_threshold",
    "prefs_from_literal",
    "psi_cap",
    "quasiconvexity_check",
    "solve_cutoff",
    "solve_persuasion_first",
    "solve_persuasion_first_binary",
    "solve_proposal_first",
    "solve_proposal_first_binary",
    "three_type_best_proposal",
    "three_type_values",
    "uhat",
    "utilde",
    "vetoer_value",
]
