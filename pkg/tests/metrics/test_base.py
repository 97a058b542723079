import numpy as np
import pytest

from fairkit.core.exceptions import ConfigError, DataValueError, ShapeError, WeightError
from fairkit.metrics import evaluate_base_metric, list_base_metrics


def test_registry_lists_all_base_metrics():
    assert list_base_metrics() == [
        "accuracy",
        "selection_rate",
        "true_positive_rate",
        "false_positive_rate",
        "false_negative_rate",
        "true_negative_rate",
        "balanced_accuracy",
        "count",
    ]


def test_hand_computed_values(toy_labels):
    y_true, y_pred, _ = toy_labels

    assert evaluate_base_metric("accuracy", y_true, y_pred) == pytest.approx(0.6)
    assert evaluate_base_metric("selection_rate", None, y_pred) == pytest.approx(0.6)
    assert evaluate_base_metric("true_positive_rate", y_true, y_pred) == pytest.approx(2 / 3)
    assert evaluate_base_metric("false_negative_rate", y_true, y_pred) == pytest.approx(1 / 3)
    assert evaluate_base_metric("false_positive_rate", y_true, y_pred) == pytest.approx(0.5)
    assert evaluate_base_metric("true_negative_rate", y_true, y_pred) == pytest.approx(0.5)
    assert evaluate_base_metric("balanced_accuracy", y_true, y_pred) == pytest.approx(7 / 12)
    assert evaluate_base_metric("count", y_true, y_pred) == 5.0


def test_zero_denominator_is_undefined():
    assert evaluate_base_metric("true_positive_rate", [0, 0], [1, 0]) is None
    assert evaluate_base_metric("balanced_accuracy", [0, 0], [1, 0]) is None


def test_weights_act_like_repeated_rows():
    y_true = [1, 0, 1]
    y_pred = [1, 1, 0]
    weighted = evaluate_base_metric("accuracy", y_true, y_pred, [2, 1, 3])
    repeated = evaluate_base_metric("accuracy", [1, 1, 0, 1, 1, 1], [1, 1, 1, 0, 0, 0])
    assert weighted == pytest.approx(repeated)


def test_fractional_predictions_give_expected_values():
    rng = np.random.default_rng(0)
    y_true = rng.integers(0, 2, 50)
    first = rng.integers(0, 2, 50)
    second = rng.integers(0, 2, 50)
    mixed = 0.25 * first + 0.75 * second
    for metric in ("accuracy", "selection_rate", "true_positive_rate", "false_positive_rate"):
        expected = 0.25 * evaluate_base_metric(metric, y_true, first) + 0.75 * evaluate_base_metric(
            metric, y_true, second
        )
        assert evaluate_base_metric(metric, y_true, mixed) == pytest.approx(expected, abs=1e-12)


def test_input_errors():
    with pytest.raises(ConfigError):
        evaluate_base_metric("precision", [1], [1])
    with pytest.raises(ConfigError):
        evaluate_base_metric("accuracy", None, [1])
    with pytest.raises(ShapeError):
        evaluate_base_metric("accuracy", [1, 0], [1])
    with pytest.raises(DataValueError):
        evaluate_base_metric("accuracy", [2], [1])
    with pytest.raises(DataValueError):
        evaluate_base_metric("selection_rate", None, [1.5])
    with pytest.raises(WeightError):
        evaluate_base_metric("accuracy", [1], [1], [-1.0])
    with pytest.raises(WeightError):
        evaluate_base_metric("accuracy", [1, 0], [1, 0], [0.0, 0.0])
