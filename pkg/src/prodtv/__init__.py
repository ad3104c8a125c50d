"""Total-variation distances between product distributions: exact oracles,
analytic upper/lower brackets, symmetrization channels, and gap constructions.
"""

from .bounds import (
    BoundsReport,
    LOWER_BOUND_CONSTANTS,
    LowerBoundConstants,
    bounds_report,
    hellinger_bracket,
    kl_bracket,
    l2_lower_bound,
    symmetric_affinity_upper_bound,
    symmetric_l2_upper_bound,
    trivial_bracket,
)
from .core import (
    DEFAULT_BUDGET_LOG2,
    DimensionMismatchError,
    EnumerationBudgetError,
    FiniteDist,
    FiniteProductPair,
    InvalidDistributionError,
    MarginalTV,
    ProbVector,
    TVEstimate,
    exact_tv_bernoulli,
    exact_tv_equal_marginals,
    exact_tv_general,
    marginal_tv,
    mc_tv_estimate,
)
from .extremal import (
    GapInstance,
    LOWTHER_RATIO_BOUND,
    RademacherInstance,
    gap_instance,
    gap_ratio_exact,
    lowther_check,
)
from .reduce import ScheffeReduction, scheffe_reduce
from .symmetrize import (
    Channel2x2,
    SymmetrizedPair,
    apply_channel_product,
    channel_matrix,
    symmetrize,
)

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "Channel2x2",
    "DEFAULT_BUDGET_LOG2",
    "DimensionMismatchError",
    "EnumerationBudgetError",
    "FiniteDist",
    "FiniteProductPair",
    "GapInstance",
    "InvalidDistributionError",
    "LOWER_BOUND_CONSTANTS",
    "LOWTHER_RATIO_BOUND",
    "LowerBoundConstants",
    "MarginalTV",
    "ProbVector",
    "RademacherInstance",
    "ScheffeReduction",
    "SymmetrizedPair",
    "TVEstimate",
    "apply_channel_product",
    "bounds_report",
    "channel_matrix",
    "exact_tv_bernoulli",
    "exact_tv_equal_marginals",
    "exact_tv_general",
    "gap_instance",
    "gap_ratio_exact",
    "hellinger_bracket",
    "kl_bracket",
    "l2_lower_bound",
    "lowther_check",
    "marginal_tv",
    "mc_tv_estimate",
    "scheffe_reduce",
    "symmetric_affinity_upper_bound",
    "symmetric_l2_upper_bound",
    "symmetrize",
    "trivial_bracket",
]
