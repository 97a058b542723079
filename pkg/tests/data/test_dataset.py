import numpy as np
import pandas as pd
import pytest

from fairkit.core.exceptions import ConfigError, SchemaError, ShapeError
from fairkit.data import Dataset, distinct_groups, group_labels


@pytest.fixture
def dataset():
    frame = pd.DataFrame(
        {
            "y": [1, 0, 1, 0],
            "race": np.array(["w", "b", "w", "b"], dtype=object),
            "sex": np.array(["f", "f", "m", "m"], dtype=object),
            "x": [0.5, 1.5, 2.5, 3.5],
        }
    )
    return Dataset(frame, {"y": "y_true", "race": "sensitive", "sex": "sensitive"})


def test_roles_default_to_feature(dataset):
    assert dataset.role_of("x") == "feature"
    assert dataset.sensitive_names == ["race", "sex"]
    assert dataset.single("y_true") == "y"


def test_intersectional_groups(dataset):
    assert dataset.group_labels() == [("w", "f"), ("b", "f"), ("w", "m"), ("b", "m")]
    assert dataset.groups() == [("b", "f"), ("b", "m"), ("w", "f"), ("w", "m")]
    assert dataset.groups(["race"]) == [("b",), ("w",)]


def test_group_labels_accepts_arrays_and_tuples():
    assert group_labels([1, 2, 1]) == [("1",), ("2",), ("1",)]
    assert group_labels([("a", "x"), ("b", "y")]) == [("a", "x"), ("b", "y")]
    assert distinct_groups([("b",), ("a",), ("b",)]) == [("a",), ("b",)]


def test_with_column_returns_new_dataset(dataset):
    extended = dataset.with_column("p", [1, 1, 0, 0], role="y_pred")

    assert "p" not in dataset.column_names
    assert extended.role_of("p") == "y_pred"
    assert extended.column("p").tolist() == [1, 1, 0, 0]
    with pytest.raises(ShapeError):
        dataset.with_column("p", [1, 0])


def test_select_and_equals(dataset):
    subset = dataset.select(["y", "x"])
    assert subset.column_names == ["y", "x"]
    assert subset.equals(dataset.select(["y", "x"]))
    assert not subset.equals(dataset)


def test_unknown_column_and_role():
    frame = pd.DataFrame({"a": [1]})
    with pytest.raises(SchemaError):
        Dataset(frame, {"b": "feature"})
    with pytest.raises(ConfigError):
        Dataset(frame, {"a": "label"})
    with pytest.raises(SchemaError):
        Dataset(frame).column("b")
