import numpy as np
import pandas as pd

from fairkit.data import Dataset, validate_dataset


def _codes(issues):
    return [issue.code for issue in issues]


def test_valid_dataset_has_no_errors():
    d = Dataset(
        pd.DataFrame({"y": [1, 0] * 10, "g": ["a", "b"] * 10}),
        {"y": "y_true", "g": "sensitive"},
    )
    report = validate_dataset(d)
    assert report.ok
    assert report.warnings == []


def test_missing_sensitive_column():
    d = Dataset(pd.DataFrame({"y": [1, 0]}), {"y": "y_true"})
    assert _codes(validate_dataset(d).errors) == ["no_sensitive"]
    assert validate_dataset(d, require_sensitive=False).ok


def test_value_errors():
    d = Dataset(
        pd.DataFrame(
            {
                "y": [1, 2, 0],
                "s": [0.1, np.inf, 0.3],
                "w": [1.0, -1.0, 1.0],
                "g": np.array(["a", "", "b"], dtype=object),
            }
        ),
        {"y": "y_true", "s": "score", "w": "sample_weight", "g": "sensitive"},
    )
    report = validate_dataset(d)

    assert sorted(_codes(report.errors)) == [
        "invalid_weight",
        "missing_value",
        "non_binary",
        "non_finite_score",
    ]
    non_binary = next(e for e in report.errors if e.code == "non_binary")
    assert non_binary.column == "y"
    assert "row 2" in non_binary.message
    # Group sizes are not reported while the sensitive column is invalid.
    assert "small_group" not in _codes(report.warnings)


def test_small_and_single_group_warnings():
    d = Dataset(
        pd.DataFrame({"y": [1, 0, 1], "g": ["a", "a", "a"]}),
        {"y": "y_true", "g": "sensitive"},
    )
    report = validate_dataset(d)

    assert report.ok
    assert _codes(report.warnings) == ["single_group", "small_group"]


def test_all_zero_weights():
    d = Dataset(
        pd.DataFrame({"w": [0.0, 0.0], "g": ["a", "b"]}),
        {"w": "sample_weight", "g": "sensitive"},
    )
    assert _codes(validate_dataset(d).errors) == ["invalid_weight"]


MUTATIONS = [
    ("y", np.nan, "missing_value"),
    ("y", 2.0, "non_binary"),
    ("y", -1.0, "non_binary"),
    ("p", 0.5, "non_binary"),
    ("s", np.inf, "non_finite_score"),
    ("s", np.nan, "non_finite_score"),
    ("w", -0.5, "invalid_weight"),
    ("w", np.inf, "invalid_weight"),
    ("g", "", "missing_value"),
    ("g", None, "missing_value"),
]


def test_single_cell_mutations_are_caught():
    rng = np.random.default_rng(5)
    n = 30
    roles = {"y": "y_true", "p": "y_pred", "s": "score", "w": "sample_weight", "g": "sensitive"}
    clean = pd.DataFrame(
        {
            "y": rng.integers(0, 2, n).astype(float),
            "p": rng.integers(0, 2, n).astype(float),
            "s": rng.uniform(0.0, 1.0, n),
            "w": rng.uniform(0.5, 2.0, n),
            "g": np.array(["a", "b", "c"] * 10, dtype=object),
        }
    )
    assert validate_dataset(Dataset(clean, roles)).ok

    for _ in range(100):
        column, value, code = MUTATIONS[rng.integers(len(MUTATIONS))]
        row = int(rng.integers(n))
        frame = clean.copy()
        frame[column] = frame[column].astype(object)
        frame.at[row, column] = value
        report = validate_dataset(Dataset(frame, roles))

        assert not report.ok
        assert [(e.code, e.column) for e in report.errors] == [(code, column)]
        if code != "invalid_weight":
            assert f"row {row + 1}" in report.errors[0].message
