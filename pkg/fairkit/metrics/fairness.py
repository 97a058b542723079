from typing import Callable, Dict, List, Optional

from fairkit.core.exceptions import AggregationError, ConfigError
from fairkit.metrics.aggregation import check_method, check_policy, difference, ratio
from fairkit.metrics.base import list_base_metrics
from fairkit.metrics.frame import disaggregate
from fairkit.utils.logging import logger

DerivedMetric = Callable[..., float]

_AGGREGATIONS = {"difference": difference, "ratio": ratio}


def demographic_parity_difference(
    y_pred, sensitive, sample_weight=None, method: str = "between_groups"
) -> float:
    """Gap in selection rate between the most and least selected groups."""
    r = disaggregate(["selection_rate"], None, y_pred, sensitive, sample_weight)
    return difference(r, "selection_rate", method)


def demographic_parity_ratio(
    y_pred, sensitive, sample_weight=None, method: str = "between_groups"
) -> float:
    """Ratio of the smallest to the largest group selection rate."""
    r = disaggregate(["selection_rate"], None, y_pred, sensitive, sample_weight)
    return ratio(r, "selection_rate", method)


def equalized_odds_difference(
    y_true,
    y_pred,
    sensitive,
    sample_weight=None,
    method: str = "between_groups",
    policy: str = "skip",
) -> float:
    """Larger of the true positive rate and false positive rate gaps.

    A rate that is undefined for every group (no positives, or no negatives,
    anywhere) is left out with a warning; the other rate decides.

    Raises:
        AggregationError: If both rates are undefined for every group.
    """
    r = disaggregate(
        ["true_positive_rate", "false_positive_rate"], y_true, y_pred, sensitive, sample_weight
    )
    gaps: List[float] = []
    for metric in ("true_positive_rate", "false_positive_rate"):
        try:
            gaps.append(difference(r, metric, method, policy))
        except AggregationError as e:
            if policy == "raise":
                raise
            logger.warning(f"Equalized odds ignores '{metric}': {e.message}")
    if not gaps:
        raise AggregationError("Both true and false positive rates are undefined for every group.")
    return max(gaps)


def make_derived_metric(
    metric: str,
    transform: str,
    method: str = "between_groups",
    policy: str = "skip",
) -> DerivedMetric:
    """Builds a scalar fairness metric from a base metric and an aggregation.

    The returned function ``f(y_true, y_pred, sensitive, sample_weight=None)``
    equals ``transform(disaggregate([metric], ...), metric, method, policy)``.

    Args:
        metric (str): A built-in metric name.
        transform (str): ``"difference"`` or ``"ratio"``.
        method (str): ``"between_groups"`` or ``"to_overall"``.
        policy (str): ``"skip"`` or ``"raise"`` for undefined group values.

    Raises:
        ConfigError: If any of the names is unknown.
    """
    if metric not in list_base_metrics():
        raise ConfigError(
            f"Unknown metric '{metric}'. Available metrics: {', '.join(list_base_metrics())}."
        )
    aggregate = _AGGREGATIONS.get(transform)
    if aggregate is None:
        raise ConfigError(f"Unknown transform '{transform}'. Use 'difference' or 'ratio'.")
    check_method(method)
    check_policy(policy)

    def derived(y_true, y_pred, sensitive, sample_weight=None) -> float:
        r = disaggregate([metric], y_true, y_pred, sensitive, sample_weight)
        return aggregate(r, metric, method, policy)

    suffix = "" if method == "between_groups" else f"_{method}"
    derived.__name__ = f"{metric}_{transform}{suffix}"
    return derived


def _demographic_parity(y_true, y_pred, sensitive, sample_weight=None) -> float:
    return demographic_parity_difference(y_pred, sensitive, sample_weight)


_FAIRNESS_METRICS: Dict[str, DerivedMetric] = {
    "demographic_parity_difference": _demographic_parity,
    "equalized_odds_difference": equalized_odds_difference,
}


def list_fairness_metrics() -> List[str]:
    """Fairness metric names accepted by ``resolve_fairness_metric``."""
    derived = [f"{m}_difference" for m in list_base_metrics()]
    derived += [f"{m}_difference_to_overall" for m in list_base_metrics()]
    return list(_FAIRNESS_METRICS) + derived


def resolve_fairness_metric(name: str) -> DerivedMetric:
    """Resolves a disparity metric name to ``f(y_true, y_pred, sensitive, sample_weight=None)``.

    Accepted names are ``demographic_parity_difference``,
    ``equalized_odds_difference``, ``<metric>_difference`` and
    ``<metric>_difference_to_overall``. Ratios are rejected: a disparity
    axis must read lower-is-better.

    Raises:
        ConfigError: If the name is not a known disparity metric.
    """
    if name in _FAIRNESS_METRICS:
        return _FAIRNESS_METRICS[name]
    base: Optional[str] = None
    method = "between_groups"
    if name.endswith("_difference_to_overall"):
        base, method = name[: -len("_difference_to_overall")], "to_overall"
    elif name.endswith("_difference"):
        base = name[: -len("_difference")]
    if base in list_base_metrics():
        return make_derived_metric(base, "difference", method)
    raise ConfigError(
        f"Unknown fairness metric '{name}'. Available: {', '.join(list_fairness_metrics())}."
    )
