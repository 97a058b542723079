import json
import re

import pytest

from fairkit import __version__
from fairkit.core.exceptions import FormatError
from fairkit.core.models import Report
from fairkit.metrics import disaggregate
from fairkit.report import (
    assessment_frame,
    build_report,
    compare_models,
    comparison_scatter,
    input_digest,
    render_report,
)


@pytest.fixture
def assessment(toy_labels):
    y_true, y_pred, sensitive = toy_labels
    return disaggregate(["accuracy"], y_true, y_pred, sensitive)


@pytest.fixture
def comparison():
    return compare_models(
        {"fair <model>": [1, 0, 1, 0], "biased": [1, 1, 0, 0]},
        [1, 0, 1, 0],
        ["a", "a", "b", "b"],
        "accuracy",
        "demographic_parity_difference",
    )


def test_json_report_round_trips(assessment):
    report = build_report(assessment, b"y,p,g\n", None)
    document = render_report(report, "json")

    assert document.endswith(b"}\n")
    parsed = json.loads(document)
    assert list(parsed) == ["kind", "metadata", "payload"]
    assert parsed["kind"] == "assessment"
    assert parsed["metadata"] == {
        "tool_version": __version__,
        "input_digest": input_digest(b"y,p,g\n"),
        "timestamp": None,
    }
    assert Report.model_validate(parsed) == report


def test_digest_format():
    digest = input_digest(b"")
    assert digest == "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"


def test_assessment_csv_rows(assessment):
    frame = assessment_frame(assessment)
    assert list(frame.columns) == ["scope", "sensitive", "metric", "value", "n"]
    assert len(frame) == 3
    assert frame["scope"].tolist() == ["overall", "group", "group"]
    assert frame["n"].tolist() == [5, 2, 3]

    text = render_report(build_report(assessment), "csv").decode("utf-8")
    lines = text.splitlines()
    assert len(lines) == 4
    assert lines[1].split(",")[-3:] == ["accuracy", "0.6", "5"]


def test_undefined_values_are_empty_cells():
    result = disaggregate(["true_positive_rate"], [0, 0, 1, 1], [1, 0, 1, 1], ["a", "a", "b", "b"])
    text = render_report(build_report(result), "csv").decode("utf-8")
    assert "group,a,true_positive_rate,,2" in text.splitlines()


def test_comparison_svg(comparison):
    svg = render_report(build_report(comparison), "svg").decode("utf-8")

    assert svg.startswith("<?xml")
    assert 'width="800" height="600"' in svg
    assert len(re.findall(r"<circle", svg)) == 2
    assert "fair &lt;model&gt;" in svg
    assert "biased" in svg
    assert "accuracy" in svg and "demographic_parity_difference" in svg
    assert svg == comparison_scatter(comparison)


def test_comparison_csv(comparison):
    text = render_report(build_report(comparison), "csv").decode("utf-8")
    assert text.splitlines() == [
        "model_name,performance,fairness,pareto",
        "fair <model>,1.0,0.0,True",
        "biased,0.5,1.0,False",
    ]


def test_rendering_is_deterministic(comparison):
    first = render_report(build_report(comparison, b"data"), "json")
    second = render_report(build_report(comparison, b"data"), "json")
    assert first == second


def test_format_errors(assessment):
    with pytest.raises(FormatError):
        render_report(build_report(assessment), "svg")
    with pytest.raises(FormatError):
        render_report(build_report(assessment), "xml")
