from typing import List, Mapping, Sequence, Tuple, Union

from fairkit.core.exceptions import AggregationError, ConfigError
from fairkit.core.models import ComparisonAxes, ComparisonRow, ComparisonTable
from fairkit.metrics import evaluate_base_metric, resolve_fairness_metric
from fairkit.utils.logging import logger

Models = Union[Mapping[str, object], Sequence[Tuple[str, object]]]


def pareto_flags(points: Sequence[Tuple[float, float]]) -> List[bool]:
    """Flags the ``(performance, disparity)`` points no other point dominates.

    A point is dominated when another one has performance at least as high
    and disparity at least as low, with one of the two strictly better.
    """
    flags = []
    for i, (perf, fair) in enumerate(points):
        dominated = any(
            p >= perf and f <= fair and (p > perf or f < fair)
            for j, (p, f) in enumerate(points)
            if j != i
        )
        flags.append(not dominated)
    return flags


def compare_models(
    models: Models,
    y_true,
    sensitive,
    perf_metric: str,
    fairness_metric: str,
    sample_weight=None,
) -> ComparisonTable:
    """Places each model at (performance, disparity) and marks the Pareto front.

    Args:
        models: Model name to binary or expected predictions, as a mapping
            or a sequence of pairs.
        y_true: Binary ground truth.
        sensitive: Sensitive values (see ``group_labels``).
        perf_metric (str): Built-in metric, higher is better.
        fairness_metric (str): Disparity metric, lower is better (see
            ``resolve_fairness_metric``).
        sample_weight: Optional non-negative weights.

    Returns:
        ComparisonTable: One row per model, in input order.

    Raises:
        ConfigError: No models, repeated names or unknown metric names.
        AggregationError: If a model's performance is undefined.
    """
    pairs = list(models.items()) if isinstance(models, Mapping) else list(models)
    if not pairs:
        raise ConfigError("At least one model is required for a comparison.")
    names = [name for name, _ in pairs]
    repeated = sorted({name for name in names if names.count(name) > 1})
    if repeated:
        raise ConfigError(f"Model names must be unique; repeated: {repeated}.")
    fairness = resolve_fairness_metric(fairness_metric)

    points = []
    for name, y_pred in pairs:
        performance = evaluate_base_metric(perf_metric, y_true, y_pred, sample_weight)
        if performance is None:
            raise AggregationError(f"Metric '{perf_metric}' is undefined for model '{name}'.")
        disparity = fairness(y_true, y_pred, sensitive, sample_weight)
        logger.debug(f"Model '{name}': {perf_metric}={performance}, {fairness_metric}={disparity}")
        points.append((performance, disparity))

    rows = [
        ComparisonRow(model_name=name, performance=perf, fairness=fair, pareto=flag)
        for name, (perf, fair), flag in zip(names, points, pareto_flags(points))
    ]
    return ComparisonTable(
        rows=rows,
        axes=ComparisonAxes(performance_metric=perf_metric, fairness_metric=fairness_metric),
    )
