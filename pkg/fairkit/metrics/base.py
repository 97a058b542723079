from typing import Callable, Dict, List, Optional

import numpy as np

from fairkit.core.exceptions import ConfigError, DataValueError, ShapeError, WeightError

MetricValue = Optional[float]
MetricFunction = Callable[[Optional[np.ndarray], np.ndarray, np.ndarray], MetricValue]

# Metrics that never read y_true.
LABEL_FREE_METRICS = ("selection_rate", "count")


def _ratio(numerator: float, denominator: float) -> MetricValue:
    if denominator == 0:
        return None
    return float(numerator / denominator)


def _confusion(y_true: np.ndarray, y_pred: np.ndarray, w: np.ndarray):
    # Fractional predictions count as expected confusion-matrix entries.
    tp = float(np.sum(w * y_true * y_pred))
    fn = float(np.sum(w * y_true * (1.0 - y_pred)))
    fp = float(np.sum(w * (1.0 - y_true) * y_pred))
    tn = float(np.sum(w * (1.0 - y_true) * (1.0 - y_pred)))
    return tp, fn, fp, tn


def accuracy(y_true, y_pred, w) -> MetricValue:
    tp, fn, fp, tn = _confusion(y_true, y_pred, w)
    return _ratio(tp + tn, tp + fn + fp + tn)


def selection_rate(y_true, y_pred, w) -> MetricValue:
    return _ratio(float(np.sum(w * y_pred)), float(np.sum(w)))


def true_positive_rate(y_true, y_pred, w) -> MetricValue:
    tp, fn, _, _ = _confusion(y_true, y_pred, w)
    return _ratio(tp, tp + fn)


def false_negative_rate(y_true, y_pred, w) -> MetricValue:
    tp, fn, _, _ = _confusion(y_true, y_pred, w)
    return _ratio(fn, tp + fn)


def false_positive_rate(y_true, y_pred, w) -> MetricValue:
    _, _, fp, tn = _confusion(y_true, y_pred, w)
    return _ratio(fp, fp + tn)


def true_negative_rate(y_true, y_pred, w) -> MetricValue:
    _, _, fp, tn = _confusion(y_true, y_pred, w)
    return _ratio(tn, fp + tn)


def balanced_accuracy(y_true, y_pred, w) -> MetricValue:
    tpr = true_positive_rate(y_true, y_pred, w)
    tnr = true_negative_rate(y_true, y_pred, w)
    if tpr is None or tnr is None:
        return None
    return (tpr + tnr) / 2.0


def count(y_true, y_pred, w) -> MetricValue:
    return float(len(y_pred))


_BASE_METRICS: Dict[str, MetricFunction] = {
    "accuracy": accuracy,
    "selection_rate": selection_rate,
    "true_positive_rate": true_positive_rate,
    "false_positive_rate": false_positive_rate,
    "false_negative_rate": false_negative_rate,
    "true_negative_rate": true_negative_rate,
    "balanced_accuracy": balanced_accuracy,
    "count": count,
}


def list_base_metrics() -> List[str]:
    """Names of the built-in metrics, in registry order."""
    return list(_BASE_METRICS)


def get_base_metric(name: str) -> MetricFunction:
    """Looks up a built-in metric by name.

    Raises:
        ConfigError: If the name is not a built-in metric.
    """
    metric = _BASE_METRICS.get(name)
    if metric is None:
        raise ConfigError(
            f"Unknown metric '{name}'. Available metrics: {', '.join(_BASE_METRICS)}."
        )
    return metric


def check_inputs(y_true, y_pred, sample_weight=None):
    """Converts metric inputs to float arrays and checks their invariants.

    ``y_true`` may be None; ``y_pred`` may hold expected predictions in
    [0, 1]. Without ``sample_weight`` every row weighs 1.

    Raises:
        ShapeError: On a length mismatch.
        DataValueError: If labels are not 0/1 or predictions leave [0, 1].
        WeightError: If weights are negative, non-finite or all zero.
    """
    p = np.asarray(y_pred, dtype=np.float64).ravel()
    n = len(p)
    if not np.all(np.isfinite(p)) or np.any((p < 0.0) | (p > 1.0)):
        raise DataValueError("Predictions must lie in [0, 1].")

    y = None
    if y_true is not None:
        y = np.asarray(y_true, dtype=np.float64).ravel()
        if len(y) != n:
            raise ShapeError(f"y_true has {len(y)} rows but y_pred has {n}.")
        if not np.all(np.isin(y, (0.0, 1.0))):
            raise DataValueError("y_true must contain only 0 and 1.")

    if sample_weight is None:
        w = np.ones(n, dtype=np.float64)
    else:
        w = np.asarray(sample_weight, dtype=np.float64).ravel()
        if len(w) != n:
            raise ShapeError(f"sample_weight has {len(w)} rows but y_pred has {n}.")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise WeightError("Sample weights must be finite and non-negative.")
        if n and not np.any(w > 0):
            raise WeightError("Sample weights are all zero.")
    return y, p, w


def evaluate_base_metric(
    metric_id: str, y_true, y_pred, sample_weight=None
) -> MetricValue:
    """Evaluates one built-in metric with weighted confusion-matrix counts.

    Args:
        metric_id (str): One of ``list_base_metrics()``.
        y_true: Binary ground truth, or None for ``selection_rate``/``count``.
        y_pred: Binary or expected (fractional) predictions.
        sample_weight: Optional non-negative weights.

    Returns:
        Optional[float]: The value, or None when a denominator is zero.

    Raises:
        ConfigError: Unknown metric, or ``y_true`` missing for a metric that
            needs it.
        ShapeError: Length mismatch.
        WeightError: All-zero or invalid weights.
    """
    metric = get_base_metric(metric_id)
    if y_true is None and metric_id not in LABEL_FREE_METRICS:
        raise ConfigError(f"Metric '{metric_id}' needs y_true.")
    y, p, w = check_inputs(y_true, y_pred, sample_weight)
    return metric(y, p, w)
