from .roc import RocHull, RocPoint, roc_points, upper_convex_hull
from .threshold_optimizer import (
    OBJECTIVES,
    expected_policy_predictions,
    fit_threshold_optimizer,
    load_threshold_policy,
    policy_objective,
    policy_rates,
    predict_with_policy,
    rule_for_threshold,
)

__all__ = [
    "OBJECTIVES",
    "RocHull",
    "RocPoint",
    "expected_policy_predictions",
    "fit_threshold_optimizer",
    "load_threshold_policy",
    "policy_objective",
    "policy_rates",
    "predict_with_policy",
    "roc_points",
    "rule_for_threshold",
    "upper_convex_hull",
]
