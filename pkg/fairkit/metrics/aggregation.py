from typing import List, Tuple

from fairkit.core.exceptions import AggregationError, ConfigError, UndefinedValueError
from fairkit.core.models import MetricFrameResult
from fairkit.utils.logging import logger

AGGREGATION_METHODS = ("between_groups", "to_overall")
UNDEFINED_POLICIES = ("raise", "skip")


def check_method(method: str) -> None:
    if method not in AGGREGATION_METHODS:
        raise ConfigError(
            f"Unknown aggregation method '{method}'. Use one of {list(AGGREGATION_METHODS)}."
        )


def check_policy(policy: str) -> None:
    if policy not in UNDEFINED_POLICIES:
        raise ConfigError(
            f"Unknown undefined-value policy '{policy}'. Use one of {list(UNDEFINED_POLICIES)}."
        )


def _defined_values(
    r: MetricFrameResult, metric: str, method: str, policy: str
) -> Tuple[List[float], float]:
    check_method(method)
    check_policy(policy)
    if metric not in r.metrics:
        raise ConfigError(f"Metric '{metric}' is not in the result; it has {r.metrics}.")

    values = r.group_values(metric)
    undefined = [group for group, value in values.items() if value is None]
    if undefined and policy == "raise":
        raise UndefinedValueError(f"Metric '{metric}' is undefined for groups {undefined}.")
    defined = [value for value in values.values() if value is not None]
    if not defined:
        raise AggregationError(f"Metric '{metric}' is undefined for every group.")
    if undefined:
        logger.warning(f"Skipping groups {undefined} with undefined '{metric}'.")

    overall = r.overall.get(metric)
    if method == "to_overall" and overall is None:
        raise AggregationError(f"Overall value of '{metric}' is undefined.")
    return defined, overall


def difference(
    r: MetricFrameResult,
    metric: str,
    method: str = "between_groups",
    policy: str = "skip",
) -> float:
    """Largest gap of a metric across groups.

    ``between_groups`` returns ``max - min`` over group values,
    ``to_overall`` the largest absolute deviation from the overall value.

    Raises:
        UndefinedValueError: With ``policy="raise"`` if any group value is
            undefined.
        AggregationError: If every group value (or the needed overall value)
            is undefined.
    """
    values, overall = _defined_values(r, metric, method, policy)
    if method == "between_groups":
        return float(max(values) - min(values))
    return float(max(abs(v - overall) for v in values))


def _pair_ratio(a: float, b: float) -> float:
    # 0/0 reads as parity; a zero against a nonzero value is total disparity.
    if a == 0 and b == 0:
        return 1.0
    if a == 0 or b == 0:
        return 0.0
    return min(a / b, b / a)


def ratio(
    r: MetricFrameResult,
    metric: str,
    method: str = "between_groups",
    policy: str = "skip",
) -> float:
    """Smallest ratio of a metric across groups, in [0, 1] for non-negative metrics.

    ``between_groups`` returns ``min / max`` over group values (1.0 when
    both are 0), ``to_overall`` the smallest of ``min(v/overall, overall/v)``.
    Raises like ``difference``.
    """
    values, overall = _defined_values(r, metric, method, policy)
    if method == "between_groups":
        return _pair_ratio(min(values), max(values))
    return float(min(_pair_ratio(v, overall) for v in values))
