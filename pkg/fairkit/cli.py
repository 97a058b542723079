from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import typer

from fairkit import settings
from fairkit.core.constraints import CONSTRAINT_ALIASES, CONSTRAINT_FAMILIES
from fairkit.core.exceptions import (
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    ConfigError,
    ConvergenceWarningError,
    DataValueError,
    FairkitException,
    InputError,
    MissingValueError,
    SchemaError,
    WeightError,
)
from fairkit.data import Dataset, generate_synthetic, load_synthetic_config, load_table, validate_dataset, write_csv
from fairkit.learners import list_available_learners
from fairkit.metrics import disaggregate, list_base_metrics, list_fairness_metrics
from fairkit.postprocessing import (
    OBJECTIVES,
    expected_policy_predictions,
    fit_threshold_optimizer,
    load_threshold_policy,
    predict_with_policy,
)
from fairkit.preprocessing import CorrelationRemover
from fairkit.reductions import (
    exponentiated_gradient,
    load_randomized_classifier,
    predict_randomized,
)
from fairkit.report import build_report, compare_models, render_report
from fairkit.utils.logging import logger, set_log_level
from fairkit.utils.output import emit, save_csv, save_json, save_text
from fairkit.utils.parsers import parse_column_list

# Base class of usage errors. Newer typer releases vendor click, so it is
# looked up from typer's own BadParameter rather than imported from click.
_CLICK_EXCEPTION = next(c for c in typer.BadParameter.__mro__ if c.__name__ == "ClickException")

app = typer.Typer(
    name="fairkit",
    help="Fairkit: assess and mitigate group fairness issues in binary classifiers.",
    add_completion=False,
    rich_markup_mode="markdown",
)
mitigate_app = typer.Typer(help="Fit a mitigation artifact (threshold policy or randomized classifier).")
preprocess_app = typer.Typer(help="Transform a table before training.")
app.add_typer(mitigate_app, name="mitigate")
app.add_typer(preprocess_app, name="preprocess")

_ISSUE_ERRORS = {
    "missing_value": MissingValueError,
    "non_binary": DataValueError,
    "non_finite_score": DataValueError,
    "invalid_weight": WeightError,
}


def _read_input(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise InputError(f"Could not read input file {path}: {e}")


def _role_map(*assignments: Tuple[Sequence[str], str]) -> Dict[str, str]:
    """Builds a column-to-role map, rejecting a column given two roles."""
    roles: Dict[str, str] = {}
    for columns, role in assignments:
        for name in columns:
            if roles.get(name, role) != role:
                raise ConfigError(f"Column '{name}' cannot be both '{roles[name]}' and '{role}'.")
            roles[name] = role
    return roles


def _load(
    path: str, role_map: Dict[str, str], keep_unmapped: bool = False, require_sensitive: bool = True
) -> Tuple[Dataset, bytes]:
    """Loads and validates a CSV table; validation warnings are logged."""
    raw = _read_input(path)
    dataset = load_table(raw, role_map, keep_unmapped=keep_unmapped)
    report = validate_dataset(dataset, require_sensitive=require_sensitive)
    for issue in report.warnings:
        logger.warning(issue.message)
    if not report.ok:
        issue = report.errors[0]
        error_class = _ISSUE_ERRORS.get(issue.code, SchemaError)
        raise error_class(issue.message, column=issue.column)
    logger.info(f"Loaded {path}: {dataset.n_rows} rows, columns {dataset.column_names}.")
    return dataset, raw


def _timestamp(enabled: bool) -> Optional[str]:
    return datetime.now(timezone.utc).isoformat(timespec="seconds") if enabled else None


@app.callback()
def main_callback(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log debug details to standard error."),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Only log warnings and errors."),
):
    """
    Fairkit: assess and mitigate group fairness issues in binary classifiers.
    """
    if verbose and quiet:
        raise typer.BadParameter("--verbose and --quiet are mutually exclusive.")
    set_log_level("DEBUG" if verbose else "WARNING" if quiet else settings.LOG_LEVEL)


@app.command(name="list")
def list_command():
    """
    Lists available metrics, constraints, objectives and learners.
    """
    sections = {
        "Metrics": {name: "base metric" for name in list_base_metrics()},
        "Fairness metrics": {name: "disparity, lower is better" for name in list_fairness_metrics()},
        "Constraints": {
            **{name: "constraint family" for name in CONSTRAINT_FAMILIES},
            **{alias: f"alias of {target}" for alias, target in CONSTRAINT_ALIASES.items()},
        },
        "Objectives": {name: "threshold optimizer objective" for name in OBJECTIVES},
        "Learners": list_available_learners(),
    }
    for title, entries in sections.items():
        typer.echo(f"{title}:")
        for name, description in entries.items():
            typer.echo(f"- {typer.style(name, fg=typer.colors.GREEN)}: {description}")


@app.command(name="assess")
def assess_command(
    data: str = typer.Option(..., "--data", help="Input CSV file."),
    y_true: str = typer.Option(..., "--y-true", help="Ground-truth label column."),
    y_pred: str = typer.Option(..., "--y-pred", help="Prediction column (0/1)."),
    sensitive: str = typer.Option(..., "--sensitive", help="Sensitive column(s), comma separated."),
    metrics: str = typer.Option(..., "--metrics", help="Metrics, comma separated (e.g.: accuracy,selection_rate)."),
    sample_weight: Optional[str] = typer.Option(None, "--sample-weight", help="Sample weight column."),
    output_format: str = typer.Option("json", "--format", "-f", help="Output format. Options: json, csv.", case_sensitive=False),
    output_file: Optional[str] = typer.Option(None, "--output", "-o", help="Output file path. Standard output if omitted."),
    timestamp: bool = typer.Option(False, "--timestamp", help="Record the current time in the report metadata."),
):
    """
    Disaggregated evaluation of predictions over sensitive groups.
    """
    sensitive_cols = parse_column_list(sensitive)
    metric_names = parse_column_list(metrics)
    weights = [sample_weight] if sample_weight else []
    d, raw = _load(
        data,
        _role_map(([y_true], "y_true"), ([y_pred], "y_pred"), (sensitive_cols, "sensitive"), (weights, "sample_weight")),
    )
    result = disaggregate(
        metric_names,
        d.column(y_true),
        d.column(y_pred),
        d.frame(sensitive_cols),
        sample_weight=d.column(sample_weight) if sample_weight else None,
    )
    for flag in result.flags:
        logger.warning(f"Undefined value: {flag}")
    report = build_report(result, input_bytes=raw, timestamp=_timestamp(timestamp))
    emit(render_report(report, output_format), output_file)


@app.command(name="compare")
def compare_command(
    data: str = typer.Option(..., "--data", help="Input CSV file."),
    y_true: str = typer.Option(..., "--y-true", help="Ground-truth label column."),
    sensitive: str = typer.Option(..., "--sensitive", help="Sensitive column(s), comma separated."),
    pred: str = typer.Option(..., "--pred", help="Prediction columns, one per model, comma separated."),
    perf: str = typer.Option(..., "--perf", help="Performance metric (higher is better)."),
    fairness: str = typer.Option(..., "--fairness", help="Disparity metric (lower is better)."),
    output_format: str = typer.Option("json", "--format", "-f", help="Output format. Options: json, csv, svg.", case_sensitive=False),
    output_file: Optional[str] = typer.Option(None, "--output", "-o", help="Output file path. Standard output if omitted."),
    timestamp: bool = typer.Option(False, "--timestamp", help="Record the current time in the report metadata."),
):
    """
    Places several models on a performance/disparity plane and marks the Pareto front.
    """
    sensitive_cols = parse_column_list(sensitive)
    pred_cols = parse_column_list(pred)
    # Prediction columns may hold expected predictions in [0, 1].
    d, raw = _load(
        data,
        _role_map(([y_true], "y_true"), (sensitive_cols, "sensitive"), (pred_cols, "score")),
    )
    table = compare_models(
        [(name, d.column(name)) for name in pred_cols],
        d.column(y_true),
        d.frame(sensitive_cols),
        perf,
        fairness,
    )
    report = build_report(table, input_bytes=raw, timestamp=_timestamp(timestamp))
    emit(render_report(report, output_format), output_file)


@mitigate_app.command(name="threshold")
def mitigate_threshold_command(
    data: str = typer.Option(..., "--data", help="Input CSV file."),
    y_true: str = typer.Option(..., "--y-true", help="Ground-truth label column."),
    score: str = typer.Option(..., "--score", help="Model score column."),
    sensitive: str = typer.Option(..., "--sensitive", help="Sensitive column(s), comma separated."),
    constraint: str = typer.Option(..., "--constraint", help="Parity constraint (see 'fairkit list')."),
    objective: str = typer.Option("accuracy", "--objective", help="Objective. Options: accuracy, balanced_accuracy."),
    grid_size: int = typer.Option(settings.DEFAULT_GRID_SIZE, "--grid-size", help="Uniform grid intervals of the search."),
    out: str = typer.Option(..., "--out", help="Output policy JSON file."),
):
    """
    Fits per-group randomized thresholds on a score under a parity constraint.
    """
    sensitive_cols = parse_column_list(sensitive)
    d, _ = _load(data, _role_map(([y_true], "y_true"), ([score], "score"), (sensitive_cols, "sensitive")))
    policy = fit_threshold_optimizer(
        d.column(score),
        d.column(y_true),
        d.frame(sensitive_cols),
        constraint=constraint,
        objective=objective,
        grid_size=grid_size,
        score_column=score,
    )
    save_json(policy, out)


@mitigate_app.command(name="reduce")
def mitigate_reduce_command(
    data: str = typer.Option(..., "--data", help="Input CSV file."),
    y_true: str = typer.Option(..., "--y-true", help="Ground-truth label column."),
    features: str = typer.Option(..., "--features", help="Numeric feature columns, comma separated."),
    sensitive: str = typer.Option(..., "--sensitive", help="Sensitive column(s), comma separated."),
    constraint: str = typer.Option(..., "--constraint", help="Constraint family (see 'fairkit list')."),
    eps: float = typer.Option(settings.DEFAULT_EPS, "--eps", help="Allowed constraint violation."),
    learner: str = typer.Option("logreg", "--learner", help="Base learner. Options: logreg, stump."),
    max_iter: int = typer.Option(settings.DEFAULT_MAX_ITER, "--max-iter", help="Maximum solver iterations."),
    eta0: float = typer.Option(settings.DEFAULT_ETA0, "--eta0", help="Base learning rate."),
    bound: float = typer.Option(settings.DEFAULT_BOUND, "--bound", help="Bound on the multipliers."),
    nu: float = typer.Option(settings.DEFAULT_NU, "--nu", help="Duality gap accepted as converged."),
    linprog: bool = typer.Option(True, "--linprog/--no-linprog", help="Re-weight the hypotheses found so far with a small LP each iteration."),
    out: str = typer.Option(..., "--out", help="Output model JSON file."),
    strict: bool = typer.Option(False, "--strict", help="Exit with code 4 if the solver does not converge."),
):
    """
    Trains a randomized classifier with the exponentiated-gradient reduction.
    """
    feature_cols = parse_column_list(features)
    sensitive_cols = parse_column_list(sensitive)
    d, _ = _load(
        data,
        _role_map(([y_true], "y_true"), (feature_cols, "feature"), (sensitive_cols, "sensitive")),
    )
    q = exponentiated_gradient(
        d,
        learner,
        constraint,
        eps=eps,
        bound=bound,
        eta0=eta0,
        nu=nu,
        max_iter=max_iter,
        run_linprog_step=linprog,
        features=feature_cols,
    )
    save_json(q.to_spec(), out)
    diagnostics = q.diagnostics
    if strict and not diagnostics.converged:
        raise ConvergenceWarningError(diagnostics.final_gap, diagnostics.iterations)


@preprocess_app.command(name="correlation")
def preprocess_correlation_command(
    data: str = typer.Option(..., "--data", help="Input CSV file."),
    sensitive: str = typer.Option(..., "--sensitive", help="Sensitive column(s), comma separated."),
    out: str = typer.Option(..., "--out", help="Output CSV file."),
    alpha: float = typer.Option(1.0, "--alpha", help="Removal strength in [0, 1]."),
    features: Optional[str] = typer.Option(None, "--features", help="Columns to decorrelate. Default: all non-sensitive columns."),
    keep: Optional[str] = typer.Option(None, "--keep", help="Columns copied unchanged into the output."),
    model_out: Optional[str] = typer.Option(None, "--model-out", help="Output model JSON file. Default: <out>.model.json."),
):
    """
    Removes linear correlation between features and sensitive columns.
    """
    sensitive_cols = parse_column_list(sensitive)
    keep_cols = parse_column_list(keep)
    if features is not None:
        feature_cols = parse_column_list(features)
    else:
        header = load_table(_read_input(data), {}, keep_unmapped=True).column_names
        excluded = set(sensitive_cols) | set(keep_cols)
        feature_cols = [name for name in header if name not in excluded]
    overlap = sorted(set(keep_cols) & set(feature_cols))
    if overlap:
        raise ConfigError(f"Columns {overlap} cannot be both kept and decorrelated.")

    # Kept columns stay unmapped so they are copied verbatim.
    d, _ = _load(
        data, _role_map((sensitive_cols, "sensitive"), (feature_cols, "feature")), keep_unmapped=True
    )
    unknown = [name for name in keep_cols if name not in d.column_names]
    if unknown:
        raise SchemaError(f"Column '{unknown[0]}' is not in the CSV header.", column=unknown[0])
    frame = d.frame()
    remover = CorrelationRemover(sensitive_cols, alpha=alpha)
    transformed = remover.fit_transform(frame, features=feature_cols)
    output = frame[keep_cols].join(transformed) if keep_cols else transformed
    save_csv(output, out)
    save_json(remover.model_, model_out or f"{out}.model.json")


@app.command(name="apply")
def apply_command(
    data: str = typer.Option(..., "--data", help="Input CSV file."),
    out: str = typer.Option(..., "--out", help="Output CSV file with an appended 'prediction' column."),
    policy: Optional[str] = typer.Option(None, "--policy", help="Threshold policy JSON file."),
    model: Optional[str] = typer.Option(None, "--model", help="Randomized classifier JSON file."),
    seed: int = typer.Option(settings.DEFAULT_SEED, "--seed", help="Seed of the sampling stream."),
    mode: str = typer.Option("expectation", "--mode", help="Options: expectation, sample."),
):
    """
    Applies a threshold policy or randomized classifier to a table.
    """
    if (policy is None) == (model is None):
        raise ConfigError("Pass exactly one of --policy or --model.")
    if mode not in ("expectation", "sample"):
        raise ConfigError(f"Unknown prediction mode '{mode}'. Options: expectation, sample.")

    if policy is not None:
        fitted = load_threshold_policy(policy)
        if not fitted.score_column:
            raise ConfigError(f"Policy {policy} does not record its score column.")
        roles = _role_map(([fitted.score_column], "score"), (fitted.sensitive_columns, "sensitive"))
        d, _ = _load(data, roles, keep_unmapped=True)
        scores = d.column(fitted.score_column)
        sensitive_frame = d.frame(fitted.sensitive_columns)
        if mode == "expectation":
            predictions = expected_policy_predictions(fitted, scores, sensitive_frame)
        else:
            predictions = predict_with_policy(fitted, scores, sensitive_frame, seed=seed)
    else:
        q = load_randomized_classifier(model)
        d, _ = _load(data, _role_map((q.features, "feature")), keep_unmapped=True, require_sensitive=False)
        predictions = predict_randomized(q, d.frame(q.features).to_numpy(), mode=mode, seed=seed)

    role = "score" if mode == "expectation" else "y_pred"
    save_text(write_csv(d.with_column("prediction", predictions, role=role)), out)


@app.command(name="synth")
def synth_command(
    config: str = typer.Option(..., "--config", help="Synthetic data JSON config."),
    out: str = typer.Option(..., "--out", help="Output CSV file."),
):
    """
    Generates a synthetic labelled and scored dataset.
    """
    d = generate_synthetic(load_synthetic_config(config))
    save_text(write_csv(d), out)


def main(argv: Optional[List[str]] = None) -> int:
    """Runs the CLI and returns its exit code instead of exiting.

    Usage errors exit with code 3; library errors with their own code.
    """
    command = typer.main.get_command(app)
    try:
        result = command.main(args=argv, prog_name="fairkit", standalone_mode=False)
    except _CLICK_EXCEPTION as e:
        e.show()
        return EXIT_CONFIG_ERROR
    except typer.Abort:
        return 1
    except FairkitException as e:
        location = ""
        if getattr(e, "column", None) is not None:
            location += f" [column={e.column}]"
        if getattr(e, "row", None) is not None:
            location += f" [row={e.row}]"
        logger.error(f"{e.code}{location}: {e.message}")
        return e.exit_code
    return result if isinstance(result, int) else EXIT_OK


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
