"""Exact-arithmetic toolkit for bonus plans over finite markets.

Markets are finite probability spaces whose actions are rational-valued
random variables; plans split a unit bonus pool by realized results.  The
package induces the resulting allocation games, verifies equilibria and
optimality exactly, constructs linear plans that make every
best-expectation profile an equilibrium, and builds counterexample markets
for plans that violate the monotonicity such plans require.
"""

from .construct import (
    BoundSearchResult,
    GridWitness,
    build_bounded_linear,
    build_m_linear,
    find_bounding_m,
    support_bound,
)
from .counterexamples import (
    Counterexample,
    CoordinateViolation,
    Direction,
    PairViolation,
    UniversalityReport,
    coordinate_decrease_counterexample,
    coordinate_increase_counterexample,
    four_point_shares_equal,
    pair_decrease_counterexample,
    pair_increase_counterexample,
    probe_own_coordinate,
    probe_pairs,
    universality_verdict,
    validate_counterexample,
)
from .errors import (
    ArityMismatch,
    AtomCapExceeded,
    BonusLabError,
    DegenerateSupport,
    ExpectationNotUnique,
    IncompleteMapping,
    NonPositiveProbability,
    NonSimplexTable,
    NonSimplexWeights,
    NonUnitMass,
    SearchExhausted,
    StaleViolation,
    TensorCapExceeded,
    UnparsableNumber,
)
from .game import (
    BestResponse,
    DominanceReport,
    EquilibriumReport,
    Game,
    OptimalityReport,
    OptimalityVerdict,
    Verdict,
    best_response,
    check_nash,
    check_optimal,
    expected_payoffs,
    induce_game,
    principal_value,
    pure_search_complete,
    simplex_grid,
    strict_dominance,
)
from .market import (
    Atom,
    Market,
    MixedAction,
    Profile,
    SupportStats,
    build_market,
    dump_market,
    expectation,
    load_market,
    market_from_dict,
    market_to_dict,
    product_market,
    profile_from_list,
    profile_to_list,
    two_bond_market,
    support_stats,
)
from .plans import (
    BonusPlan,
    BoundedLinearPlan,
    ConstantPlan,
    LoserTakeAllPlan,
    MLinearPlan,
    SimplexReport,
    TabulatedPlan,
    WinnerTakeAllPlan,
    dump_plan,
    evaluate,
    load_plan,
    plan_from_dict,
    plan_to_dict,
    validate_simplex,
    zero_sum_shares,
)
from .rational import Rational, as_rational, format_rational

__version__ = "0.1.0"

__all__ = [
    "ArityMismatch",
    "Atom",
    "AtomCapExceeded",
    "BestResponse",
    "BonusLabError",
    "BonusPlan",
    "BoundSearchResult",
    "BoundedLinearPlan",
    "ConstantPlan",
    "Counterexample",
    "CoordinateViolation",
    "DegenerateSupport",
    "Direction",
    "DominanceReport",
    "EquilibriumReport",
    "ExpectationNotUnique",
    "Game",
    "GridWitness",
    "IncompleteMapping",
    "LoserTakeAllPlan",
    "MLinearPlan",
    "Market",
    "MixedAction",
    "NonPositiveProbability",
    "NonSimplexTable",
    "NonSimplexWeights",
    "NonUnitMass",
    "OptimalityReport",
    "OptimalityVerdict",
    "PairViolation",
    "Profile",
    "Rational",
    "SearchExhausted",
    "SimplexReport",
    "StaleViolation",
    "SupportStats",
    "TabulatedPlan",
    "TensorCapExceeded",
    "UniversalityReport",
    "UnparsableNumber",
    "Verdict",
    "WinnerTakeAllPlan",
    "as_rational",
    "best_response",
    "build_bounded_linear",
    "build_m_linear",
    "build_market",
    "check_nash",
    "check_optimal",
    "coordinate_decrease_counterexample",
    "coordinate_increase_counterexample",
    "dump_market",
    "dump_plan",
    "evaluate",
    "expectation",
    "expected_payoffs",
    "find_bounding_m",
    "format_rational",
    "four_point_shares_equal",
    "induce_game",
    "load_market",
    "load_plan",
    "market_from_dict",
    "market_to_dict",
    "pair_decrease_counterexample",
    "pair_increase_counterexample",
    "plan_from_dict",
    "plan_to_dict",
    "principal_value",
    "probe_own_coordinate",
    "probe_pairs",
    "product_market",
    "profile_from_list",
    "profile_to_list",
    "pure_search_complete",
    "two_bond_market",
    "simplex_grid",
    "strict_dominance",
    "support_bound",
    "support_stats",
    "universality_verdict",
    "validate_counterexample",
    "validate_simplex",
    "zero_sum_shares",
]
