from typing import Callable, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from fairkit.core.exceptions import ConfigError, ShapeError
from fairkit.core.models import GroupResult, MetricFrameResult
from fairkit.data.dataset import Dataset, distinct_groups, group_labels
from fairkit.metrics.base import (
    LABEL_FREE_METRICS,
    MetricFunction,
    check_inputs,
    get_base_metric,
)
from fairkit.utils.logging import logger

MetricSpec = Union[Sequence[str], Mapping[str, Callable]]


def _resolve_metrics(metrics: MetricSpec) -> Dict[str, MetricFunction]:
    if isinstance(metrics, Mapping):
        resolved = dict(metrics)
    else:
        if isinstance(metrics, str):
            metrics = [metrics]
        names = list(metrics)
        if len(set(names)) != len(names):
            raise ConfigError(f"Metric list repeats a name: {names}.")
        resolved = {name: get_base_metric(name) for name in names}
    if not resolved:
        raise ConfigError("At least one metric is required.")
    return resolved


def _sensitive_names(sensitive, n_columns: int) -> List[str]:
    if isinstance(sensitive, pd.DataFrame):
        return [str(c) for c in sensitive.columns]
    if isinstance(sensitive, pd.Series) and sensitive.name is not None:
        return [str(sensitive.name)]
    if n_columns == 1:
        return ["sensitive"]
    return [f"sensitive_{j}" for j in range(n_columns)]


def _evaluate(metric: MetricFunction, y, p, w) -> Optional[float]:
    value = metric(y, p, w)
    return None if value is None else float(value)


def disaggregate(
    metrics: MetricSpec,
    y_true,
    y_pred,
    sensitive,
    sample_weight=None,
) -> MetricFrameResult:
    """Evaluates metrics on all rows and separately on every sensitive group.

    Args:
        metrics: Built-in metric names, or a mapping of names to callables
            ``f(y_true, y_pred, sample_weight) -> float | None``.
        y_true: Binary ground truth. May be None when every metric ignores it.
        y_pred: Binary or expected predictions.
        sensitive: One or more sensitive columns (see ``group_labels``);
            several columns combine into intersectional groups.
        sample_weight: Optional non-negative weights.

    Returns:
        MetricFrameResult: Overall and per-group values, groups in
        lexicographic order. Undefined values are None and add a flag.

    Raises:
        ConfigError: Empty metric list or unknown metric name.
        ShapeError: Inputs of different lengths.
    """
    resolved = _resolve_metrics(metrics)
    if y_true is None and not isinstance(metrics, Mapping):
        needs_labels = [name for name in resolved if name not in LABEL_FREE_METRICS]
        if needs_labels:
            raise ConfigError(f"Metrics {needs_labels} need y_true.")
    y, p, w = check_inputs(y_true, y_pred, sample_weight)

    labels = group_labels(sensitive)
    if len(labels) != len(p):
        raise ShapeError(f"sensitive has {len(labels)} rows but y_pred has {len(p)}.")
    groups = distinct_groups(labels)
    names = _sensitive_names(sensitive, len(groups[0]) if groups else 1)

    overall = {name: _evaluate(f, y, p, w) for name, f in resolved.items()}

    index: Dict[tuple, List[int]] = {}
    for i, key in enumerate(labels):
        index.setdefault(key, []).append(i)

    by_group = []
    flags = []
    for group in groups:
        rows = np.asarray(index[group], dtype=np.int64)
        yg = None if y is None else y[rows]
        values = {name: _evaluate(f, yg, p[rows], w[rows]) for name, f in resolved.items()}
        for name, value in values.items():
            if value is None:
                flags.append(f"undefined:{name}:{'|'.join(group)}")
        by_group.append(GroupResult(group=list(group), values=values, n=len(rows)))

    for name, value in overall.items():
        if value is None:
            flags.append(f"undefined:{name}:overall")
    if flags:
        logger.debug(f"Undefined metric values: {flags}")

    return MetricFrameResult(
        metrics=list(resolved),
        overall=overall,
        by_group=by_group,
        flags=flags,
        sensitive_names=names,
    )


def disaggregate_dataset(
    metrics: MetricSpec, d: Dataset, y_pred_column: Optional[str] = None
) -> MetricFrameResult:
    """Runs ``disaggregate`` on the role-tagged columns of a Dataset.

    Uses the single ``y_true`` column (if any), ``y_pred_column`` or the
    single ``y_pred`` column, every sensitive column and the optional
    ``sample_weight`` column.
    """
    y_pred_column = y_pred_column or d.single("y_pred")
    y_true = d.column(d.single("y_true")) if d.columns_with_role("y_true") else None
    weights = d.columns_with_role("sample_weight")
    sample_weight = d.column(weights[0]) if weights else None
    return disaggregate(
        metrics,
        y_true,
        d.column(y_pred_column),
        d.frame(d.sensitive_names),
        sample_weight=sample_weight,
    )
