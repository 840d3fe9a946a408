"""Streaming bicriteria algorithms for weighted k-submodular cover."""

from .errors import (
    BudgetExceededError,
    ConfigError,
    GenerationError,
    InfeasibleError,
    InstanceError,
    KSubCoverError,
    ParseError,
    PreconditionError,
)
from .kset import KSet, WeightTable, insert, join, kset_weight, meet, precedes, support
from .oracles import (
    CountingOracle,
    CoverageFunction,
    SeparableFunction,
    TabularFunction,
    UtilityOracle,
    best_marginal,
    best_singleton,
    marginal_gain,
)
from .streaming import (
    GuessLadder,
    ProblemConfig,
    SolverResult,
    algorithm1,
    algorithm2,
    algorithm3,
    build_guess_set,
    make_threshold_state,
    process_element,
    update_lower_bound,
    weight_extremes,
)
from .exact import check_bicriteria, exact_cover, max_utility, guarantee_factors
from .verify import (
    check_marginal_bound,
    verify_ksubmodular,
    verify_monotone,
    verify_orthant_submodular,
    verify_pairwise_monotone,
)

__version__ = "0.1.0"
