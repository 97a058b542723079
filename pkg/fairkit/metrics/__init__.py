from .aggregation import AGGREGATION_METHODS, UNDEFINED_POLICIES, difference, ratio
from .base import evaluate_base_metric, get_base_metric, list_base_metrics
from .fairness import (
    demographic_parity_difference,
    demographic_parity_ratio,
    equalized_odds_difference,
    list_fairness_metrics,
    make_derived_metric,
    resolve_fairness_metric,
)
from .frame import disaggregate, disaggregate_dataset

__all__ = [
    "AGGREGATION_METHODS",
    "UNDEFINED_POLICIES",
    "difference",
    "ratio",
    "evaluate_base_metric",
    "get_base_metric",
    "list_base_metrics",
    "demographic_parity_difference",
    "demographic_parity_ratio",
    "equalized_odds_difference",
    "list_fairness_metrics",
    "make_derived_metric",
    "resolve_fairness_metric",
    "disaggregate",
    "disaggregate_dataset",
]
