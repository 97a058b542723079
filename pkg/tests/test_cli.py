import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from fairkit.cli import main
from fairkit.metrics import disaggregate

FIXTURES = Path(__file__).parent / "fixtures"

SYNTH_CONFIG = {
    "n_rows": 600,
    "group_weights": {"a": 0.6, "b": 0.4},
    "base_rates": {"a": 0.6, "b": 0.3},
    "score_noise": 0.2,
    "seed": 3,
    "n_features": 2,
}


@pytest.fixture
def synth_csv(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps(SYNTH_CONFIG), encoding="utf-8")
    out = tmp_path / "synth.csv"
    assert main(["synth", "--config", str(config), "--out", str(out)]) == 0
    return out


def _assess_args(*extra):
    return [
        "assess",
        "--data",
        str(FIXTURES / "assess_input.csv"),
        "--y-true",
        "y",
        "--y-pred",
        "p",
        "--sensitive",
        "g",
        "--metrics",
        "accuracy,selection_rate",
        *extra,
    ]


def test_assess_json_matches_golden_file(capsys):
    assert main(_assess_args()) == 0
    out = capsys.readouterr().out
    assert out == (FIXTURES / "assess_expected.json").read_text(encoding="utf-8")


def test_assess_csv_to_file(tmp_path):
    target = tmp_path / "report.csv"
    assert main(_assess_args("--format", "csv", "--output", str(target))) == 0
    assert target.read_bytes() == (FIXTURES / "assess_expected.csv").read_bytes()


def test_assess_timestamp_is_opt_in(capsys):
    assert main(_assess_args("--timestamp")) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["metadata"]["timestamp"].endswith("+00:00")


def test_compare_json_matches_golden_file(capsys):
    args = [
        "compare",
        "--data",
        str(FIXTURES / "compare_input.csv"),
        "--y-true",
        "y",
        "--sensitive",
        "g",
        "--pred",
        "m1,m2",
        "--perf",
        "accuracy",
        "--fairness",
        "demographic_parity_difference",
    ]
    assert main(args) == 0
    assert capsys.readouterr().out == (FIXTURES / "compare_expected.json").read_text(encoding="utf-8")

    assert main(args + ["--format", "csv"]) == 0
    assert capsys.readouterr().out == (FIXTURES / "compare_expected.csv").read_text(encoding="utf-8")

    assert main(args + ["--format", "svg"]) == 0
    svg = capsys.readouterr().out
    assert svg == (FIXTURES / "compare_expected.svg").read_text(encoding="utf-8")
    assert svg.count("<circle") == 2


def test_input_errors_exit_with_code_2(tmp_path, capsys):
    data = tmp_path / "bad.csv"
    data.write_text("y,p,g\n1,1,a\n2,0,b\n", encoding="utf-8")
    code = main(
        ["assess", "--data", str(data), "--y-true", "y", "--y-pred", "p", "--sensitive", "g", "--metrics", "accuracy"]
    )
    assert code == 2
    err = capsys.readouterr().err
    assert "[column=y]" in err and "[row=2]" in err

    assert main(_assess_args()[:2] + [str(tmp_path / "missing.csv")] + _assess_args()[3:]) == 2


def test_usage_and_config_errors_exit_with_code_3(capsys):
    assert main(["frobnicate"]) == 3
    assert main(["assess", "--data", str(FIXTURES / "assess_input.csv")]) == 3
    assert main(["--verbose", "--quiet", "list"]) == 3
    assert main(["assess", "--bogus"]) == 3
    assert main(["mitigate", "reduce", "--max-iter", "many"]) == 3
    assert "Traceback" not in capsys.readouterr().err
    bad_metric = _assess_args()
    bad_metric[-1] = "accuracy,precision_at_k"
    assert main(bad_metric) == 3
    assert main(_assess_args("--format", "svg")) != 0


def test_list_names_everything(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in (
        "accuracy",
        "demographic_parity_difference",
        "equalized_odds",
        "false_negative_rate_parity",
        "balanced_accuracy",
        "decision_stump",
    ):
        assert name in out
    assert main(["--help"]) == 0


def test_synth_is_reproducible(synth_csv, tmp_path):
    again = tmp_path / "again.csv"
    config = tmp_path / "config.json"
    assert main(["synth", "--config", str(config), "--out", str(again)]) == 0
    assert again.read_bytes() == synth_csv.read_bytes()
    assert synth_csv.read_text(encoding="utf-8").splitlines()[0] == "y_true,score,group,y_pred,x0,x1"


def test_threshold_policy_round_trip(synth_csv, tmp_path):
    policy = tmp_path / "policy.json"
    scored = tmp_path / "scored.csv"
    fit_args = [
        "mitigate",
        "threshold",
        "--data",
        str(synth_csv),
        "--y-true",
        "y_true",
        "--score",
        "score",
        "--sensitive",
        "group",
        "--constraint",
        "equalized_odds",
        "--out",
        str(policy),
    ]
    assert main(fit_args) == 0
    assert json.loads(policy.read_text(encoding="utf-8"))["score_column"] == "score"
    first_policy = policy.read_bytes()
    assert main(fit_args) == 0
    assert policy.read_bytes() == first_policy
    assert main(["apply", "--data", str(synth_csv), "--policy", str(policy), "--out", str(scored)]) == 0

    frame = pd.read_csv(scored)
    original = pd.read_csv(synth_csv)
    assert list(frame.columns) == [*original.columns, "prediction"]
    pd.testing.assert_frame_equal(frame[original.columns], original)
    r = disaggregate(
        ["true_positive_rate", "false_positive_rate"], frame["y_true"], frame["prediction"], frame["group"]
    )
    for metric in ("true_positive_rate", "false_positive_rate"):
        values = list(r.group_values(metric).values())
        assert max(values) - min(values) <= 1e-6

    sampled = tmp_path / "sampled.csv"
    args = ["apply", "--data", str(synth_csv), "--policy", str(policy), "--mode", "sample", "--seed", "4"]
    assert main(args + ["--out", str(sampled)]) == 0
    assert set(pd.read_csv(sampled)["prediction"]) <= {0, 1}
    resampled = tmp_path / "resampled.csv"
    assert main(args + ["--out", str(resampled)]) == 0
    assert resampled.read_bytes() == sampled.read_bytes()


def test_reduce_then_apply(synth_csv, tmp_path):
    model = tmp_path / "model.json"
    args = [
        "mitigate",
        "reduce",
        "--data",
        str(synth_csv),
        "--y-true",
        "y_true",
        "--features",
        "x0,x1",
        "--sensitive",
        "group",
        "--constraint",
        "demographic_parity",
        "--learner",
        "stump",
        "--max-iter",
        "10",
        "--out",
        str(model),
    ]
    assert main(args) == 0
    artifact = json.loads(model.read_text(encoding="utf-8"))
    assert artifact["features"] == ["x0", "x1"]
    assert artifact["diagnostics"]["iterations"] <= 10

    scored = tmp_path / "scored.csv"
    assert main(["apply", "--data", str(synth_csv), "--model", str(model), "--out", str(scored)]) == 0
    predictions = pd.read_csv(scored)["prediction"].to_numpy()
    assert np.all((predictions >= 0) & (predictions <= 1))

    assert main(["apply", "--data", str(synth_csv), "--model", str(model), "--policy", str(model), "--out", str(scored)]) == 3


def test_strict_non_convergence_exits_with_code_4(synth_csv, tmp_path, capsys):
    model = tmp_path / "model.json"
    args = [
        "mitigate",
        "reduce",
        "--data",
        str(synth_csv),
        "--y-true",
        "y_true",
        "--features",
        "x0,x1",
        "--sensitive",
        "group",
        "--constraint",
        "demographic_parity",
        "--learner",
        "stump",
        "--eps",
        "0",
        "--nu",
        "0",
        "--max-iter",
        "1",
        "--no-linprog",
        "--out",
        str(model),
    ]
    assert main(args + ["--strict"]) == 4
    assert model.exists()
    assert "not_converged" in capsys.readouterr().err
    assert main(args) == 0


def test_preprocess_correlation(synth_csv, tmp_path):
    out = tmp_path / "decorrelated.csv"
    args = [
        "preprocess",
        "correlation",
        "--data",
        str(synth_csv),
        "--sensitive",
        "group",
        "--features",
        "x0,x1",
        "--keep",
        "y_true",
        "--out",
        str(out),
    ]
    assert main(args) == 0
    frame = pd.read_csv(out)
    original = pd.read_csv(synth_csv)
    assert list(frame.columns) == ["y_true", "x0", "x1"]
    assert frame["y_true"].tolist() == original["y_true"].tolist()
    is_b = (original["group"] == "b").to_numpy(dtype=float)
    for column in ("x0", "x1"):
        assert abs(np.corrcoef(frame[column], is_b)[0, 1]) <= 1e-8
    assert Path(f"{out}.model.json").exists()

    overlap = args[:-4] + ["--keep", "x0", "--out", str(out)]
    assert main(overlap) == 3
