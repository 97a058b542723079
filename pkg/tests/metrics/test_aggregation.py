import pytest

from fairkit.core.exceptions import AggregationError, ConfigError, UndefinedValueError
from fairkit.core.models import GroupResult, MetricFrameResult
from fairkit.metrics import difference, disaggregate, ratio


def _result(values, overall):
    return MetricFrameResult(
        metrics=["m"],
        overall={"m": overall},
        by_group=[GroupResult(group=[f"g{i}"], values={"m": v}, n=1) for i, v in enumerate(values)],
    )


def test_difference_and_ratio_between_groups(toy_labels):
    y_true, y_pred, sensitive = toy_labels
    r = disaggregate(["selection_rate"], y_true, y_pred, sensitive)

    assert difference(r, "selection_rate") == pytest.approx(2 / 3)
    assert ratio(r, "selection_rate") == pytest.approx(1 / 3)


def test_to_overall():
    r = _result([0.2, 0.5, 0.9], 0.6)
    assert difference(r, "m", "to_overall") == pytest.approx(0.4)
    assert ratio(r, "m", "to_overall") == pytest.approx(0.2 / 0.6)


def test_ratio_zero_conventions():
    assert ratio(_result([0.0, 0.0], 0.0), "m") == 1.0
    assert ratio(_result([0.0, 0.5], 0.25), "m") == 0.0


def test_single_group_has_no_disparity():
    r = _result([0.3], 0.3)
    assert difference(r, "m") == 0.0
    assert ratio(r, "m") == 1.0


def test_undefined_group_values(log_messages):
    r = _result([0.2, None, 0.6], 0.4)

    assert difference(r, "m") == pytest.approx(0.4)
    assert any("undefined" in message for message in log_messages)
    with pytest.raises(UndefinedValueError):
        difference(r, "m", policy="raise")
    with pytest.raises(AggregationError):
        difference(_result([None, None], None), "m")
    with pytest.raises(AggregationError):
        difference(_result([0.1, 0.2], None), "m", "to_overall")


def test_unknown_names():
    r = _result([0.1], 0.1)
    with pytest.raises(ConfigError):
        difference(r, "m", "pairwise")
    with pytest.raises(ConfigError):
        difference(r, "m", policy="ignore")
    with pytest.raises(ConfigError):
        ratio(r, "other")
