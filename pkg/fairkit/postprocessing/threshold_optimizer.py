import json
import math
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from fairkit import settings
from fairkit.core.constraints import resolve_constraint
from fairkit.core.exceptions import (
    ConfigError,
    DataValueError,
    DegenerateGroupError,
    FitError,
    PredictionError,
    ShapeError,
)
from fairkit.core.models import (
    GroupKey,
    GroupPolicy,
    MetricFrameResult,
    MixtureComponent,
    PrimitiveRule,
    ThresholdPolicy,
)
from fairkit.data.dataset import distinct_groups, group_labels
from fairkit.metrics.frame import disaggregate
from fairkit.postprocessing.roc import (
    RocHull,
    RocPoint,
    locate,
    roc_points,
    threshold_table,
    upper_convex_hull,
    upper_envelope,
)
from fairkit.utils.logging import logger

OBJECTIVES = ("accuracy", "balanced_accuracy")

Vertex = Tuple[float, float, float]
Mixture = List[Tuple[float, PrimitiveRule]]


def rule_for_threshold(theta: float) -> PrimitiveRule:
    """Rule "predict 1 iff score > theta"; infinite thresholds become constants."""
    if theta == math.inf:
        return PrimitiveRule(kind="constant", param=0.0)
    if theta == -math.inf:
        return PrimitiveRule(kind="constant", param=1.0)
    return PrimitiveRule(kind="threshold", param=float(theta))


def rule_for_coin(p: float) -> PrimitiveRule:
    """Rule "predict 1 with probability p"; certain coins become constants."""
    if p <= 0.0:
        return PrimitiveRule(kind="constant", param=0.0)
    if p >= 1.0:
        return PrimitiveRule(kind="constant", param=1.0)
    return PrimitiveRule(kind="coin", param=float(p))


def _merge_rules(mixture: Mixture) -> Mixture:
    """Sums the weights of identical rules, keeping first-seen order."""
    merged: Dict[Tuple[str, float], Tuple[float, PrimitiveRule]] = {}
    for w, rule in mixture:
        key = (rule.kind, rule.param)
        merged[key] = (merged[key][0] + w, rule) if key in merged else (w, rule)
    return list(merged.values())


class _Group:
    """Fitting data of one sensitive group."""

    def __init__(self, key: GroupKey, scores: np.ndarray, y: np.ndarray, n_total: int):
        self.key = key
        self.scores = scores
        self.y = y
        self.n = len(y)
        self.positives = float(y.sum())
        self.negatives = float(self.n - self.positives)
        self.weight = self.n / n_total

    def objective(self, objective: str, tp, fp):
        """Objective of expected true/false positive counts ``tp`` and ``fp``."""
        if objective == "accuracy":
            return (tp + self.negatives - fp) / self.n
        return (tp / self.positives + (self.negatives - fp) / self.negatives) / 2.0

    def hull(self) -> RocHull:
        try:
            return upper_convex_hull(roc_points(self.scores, self.y, self.key))
        except DegenerateGroupError as e:
            raise FitError(
                f"Group {self.key} has a single class; the constraint needs both: {e.message}"
            )


def _mix(pairs: Sequence[Tuple[float, float]], vertices: Sequence[Vertex]) -> Mixture:
    """Mixture over vertex rules from ``(weight, vertex index)`` pairs, zero weights dropped."""
    mixture: Mixture = []
    for weight, k in pairs:
        if weight > 0:
            mixture.append((weight, rule_for_threshold(vertices[int(k)][2])))
    return mixture


def _boundary_mixture(xs: np.ndarray, vertices: Sequence[Vertex], x: float) -> Mixture:
    k, alpha = locate(xs, x)
    if alpha == 0.0:
        return _mix([(1.0, k)], vertices)
    return _mix([(1.0 - alpha, k), (alpha, k + 1)], vertices)


def _best(candidates: np.ndarray, values: np.ndarray) -> Tuple[float, float]:
    """Largest value, ties within tolerance going to the smallest candidate."""
    order = np.argsort(candidates, kind="stable")
    candidates, values = candidates[order], values[order]
    top = values.max()
    i = int(np.flatnonzero(values >= top - settings.OBJECTIVE_TIE_TOLERANCE)[0])
    return float(candidates[i]), float(values[i])


def _candidates(grid_size: int, *extra: Sequence[float]) -> np.ndarray:
    points = [np.linspace(0.0, 1.0, grid_size + 1)]
    points.extend(np.asarray(e, dtype=np.float64) for e in extra)
    return np.unique(np.clip(np.concatenate(points), 0.0, 1.0))


def _fit_demographic_parity(groups: List[_Group], objective: str, grid_size: int):
    curves = []
    for g in groups:
        if objective == "balanced_accuracy" and (g.positives == 0 or g.negatives == 0):
            raise FitError(f"Group {g.key} has a single class; balanced accuracy is undefined.")
        thresholds, tp, fp = threshold_table(g.scores, g.y)
        rates = (tp + fp) / g.n
        values = g.objective(objective, tp, fp)
        vertices = upper_envelope(zip(rates, values, thresholds))
        xs = np.array([v[0] for v in vertices])
        ys = np.array([v[1] for v in vertices])
        curves.append((vertices, xs, ys))

    candidates = _candidates(grid_size, *(xs for _, xs, _ in curves))
    total = sum(g.weight * np.interp(candidates, xs, ys) for g, (_, xs, ys) in zip(groups, curves))
    rate, value = _best(candidates, total)
    mixtures = [_boundary_mixture(xs, vertices, rate) for vertices, xs, _ in curves]
    logger.debug(f"Demographic parity optimum at selection rate {rate!r}.")
    return mixtures, value


def _crossings(hulls: List[RocHull]) -> List[float]:
    """False positive rates where two group boundaries cross."""
    points: List[float] = []
    for i in range(len(hulls)):
        for j in range(i + 1, len(hulls)):
            breaks = np.union1d(hulls[i].fprs, hulls[j].fprs)
            diff = hulls[i].tpr_at(breaks) - hulls[j].tpr_at(breaks)
            for k in range(len(breaks) - 1):
                if diff[k] * diff[k + 1] < 0:
                    a, b = breaks[k], breaks[k + 1]
                    points.append(float(a + (b - a) * diff[k] / (diff[k] - diff[k + 1])))
    return points


def _fit_equalized_odds(groups: List[_Group], objective: str, grid_size: int):
    hulls = [g.hull() for g in groups]
    candidates = _candidates(grid_size, *(h.fprs for h in hulls), _crossings(hulls))
    common_tpr = np.min([h.tpr_at(candidates) for h in hulls], axis=0)
    total = sum(
        g.weight * g.objective(objective, common_tpr * g.positives, candidates * g.negatives)
        for g in groups
    )
    x, value = _best(candidates, total)
    t = float(np.min([h.tpr_at(x) for h in hulls]))

    mixtures = []
    for hull in hulls:
        vertices = [tuple(v) for v in hull.vertices]
        boundary = _boundary_mixture(hull.fprs, vertices, x)
        h = float(hull.tpr_at(x))
        beta = 1.0 if h <= x else min(1.0, max(0.0, (t - x) / (h - x)))
        mixture = [(beta * w, rule) for w, rule in boundary if beta * w > 0]
        if beta < 1.0:
            mixture.append((1.0 - beta, rule_for_coin(x)))
        mixtures.append(_merge_rules(mixture))
    logger.debug(f"Equalized odds optimum at operating point ({x!r}, {t!r}).")
    return mixtures, value


def _inverse_curve(hull: RocHull) -> List[Vertex]:
    """Cheapest false positive rate per true positive rate, as ``(tpr, fpr, threshold)``."""
    vertices = list(hull.vertices)
    if vertices[0].tpr > 0:
        vertices.insert(0, RocPoint(0.0, 0.0, math.inf))
    curve: List[Vertex] = []
    for v in vertices:
        curve.append((v.tpr, v.fpr, v.threshold))
        if v.tpr >= 1.0:
            break
    return curve


def _fit_true_positive_rate_parity(groups: List[_Group], objective: str, grid_size: int):
    curves = []
    for g in groups:
        curve = _inverse_curve(g.hull())
        curves.append((curve, np.array([c[0] for c in curve]), np.array([c[1] for c in curve])))
    candidates = _candidates(grid_size, *(xs for _, xs, _ in curves))
    total = sum(
        g.weight * g.objective(objective, candidates * g.positives, np.interp(candidates, xs, ys) * g.negatives)
        for g, (_, xs, ys) in zip(groups, curves)
    )
    tpr, value = _best(candidates, total)
    mixtures = [_boundary_mixture(xs, curve, tpr) for curve, xs, _ in curves]
    return mixtures, value


def _fit_false_positive_rate_parity(groups: List[_Group], objective: str, grid_size: int):
    hulls = [g.hull() for g in groups]
    candidates = _candidates(grid_size, *(h.fprs for h in hulls))
    total = sum(
        g.weight * g.objective(objective, h.tpr_at(candidates) * g.positives, candidates * g.negatives)
        for g, h in zip(groups, hulls)
    )
    fpr, value = _best(candidates, total)
    mixtures = [
        _boundary_mixture(h.fprs, [tuple(v) for v in h.vertices], fpr) for h in hulls
    ]
    return mixtures, value


_FITTERS: Dict[str, Callable] = {
    "demographic_parity": _fit_demographic_parity,
    "equalized_odds": _fit_equalized_odds,
    "true_positive_rate_parity": _fit_true_positive_rate_parity,
    "false_positive_rate_parity": _fit_false_positive_rate_parity,
}


def _sensitive_columns(sensitive) -> List[str]:
    if isinstance(sensitive, pd.DataFrame):
        return [str(c) for c in sensitive.columns]
    if isinstance(sensitive, pd.Series) and sensitive.name is not None:
        return [str(sensitive.name)]
    return []


def _scores(scores) -> np.ndarray:
    s = np.asarray(scores, dtype=np.float64).ravel()
    if not np.all(np.isfinite(s)):
        raise DataValueError("Scores must be finite numbers.")
    return s


def fit_threshold_optimizer(
    scores,
    y_true,
    sensitive,
    constraint: str = "demographic_parity",
    objective: str = "accuracy",
    grid_size: int = settings.DEFAULT_GRID_SIZE,
    score_column: Optional[str] = None,
) -> ThresholdPolicy:
    """Fits one randomized threshold rule per group under a parity constraint.

    Each group's achievable operating points are the mixtures of its
    threshold rules. The common value of the constrained rate (selection
    rate, false or true positive rate) is searched on ``grid_size + 1``
    uniform points plus every vertex of the groups' piecewise-linear
    curves, so the optimum is exact. The objective is the group-size
    weighted per-group ``accuracy`` or ``balanced_accuracy``; ties go to
    the smallest constrained rate.

    Args:
        scores: Model scores; higher means more likely positive.
        y_true: Binary labels.
        sensitive: Sensitive values (see ``group_labels``).
        constraint (str): ``demographic_parity``, ``equalized_odds``,
            ``true_positive_rate_parity`` (alias ``false_negative_rate_parity``)
            or ``false_positive_rate_parity``.
        objective (str): ``accuracy`` or ``balanced_accuracy``.
        grid_size (int): Number of uniform grid intervals, at least 1.
        score_column (Optional[str]): Score column name recorded in the policy.

    Returns:
        ThresholdPolicy: The fitted policy with analytic operating points.

    Raises:
        ConfigError: Unknown constraint or objective, or ``grid_size < 1``.
        FitError: A group lacks a class the constraint or objective needs.
    """
    constraint = resolve_constraint(constraint)
    if objective not in OBJECTIVES:
        raise ConfigError(f"Unknown objective '{objective}'. Use one of {list(OBJECTIVES)}.")
    if grid_size < 1:
        raise ConfigError(f"grid_size must be at least 1, got {grid_size}.")

    s = _scores(scores)
    y = np.asarray(y_true, dtype=np.float64).ravel()
    labels = group_labels(sensitive)
    if not (len(s) == len(y) == len(labels)):
        raise ShapeError("scores, y_true and sensitive must have the same number of rows.")
    if len(s) == 0:
        raise FitError("Cannot fit a threshold policy on an empty table.")

    keys = distinct_groups(labels)
    groups = []
    for key in keys:
        mask = np.array([label == key for label in labels])
        groups.append(_Group(key, s[mask], y[mask], len(s)))
    if len(groups) == 1:
        logger.info("Single group: the constraint is vacuous.")

    mixtures, value = _FITTERS[constraint](groups, objective, grid_size)

    policies = []
    for g, mixture in zip(groups, mixtures):
        components = [MixtureComponent(w=w, rule=rule) for w, rule in mixture]
        expected = _expected(components, g.scores)
        rates = disaggregate(
            ["selection_rate", "true_positive_rate", "false_positive_rate"],
            g.y,
            expected,
            [g.key] * g.n,
        ).overall
        policies.append(GroupPolicy(group=list(g.key), mixture=components, operating_point=rates))

    logger.info(
        f"Fitted {constraint} threshold policy over {len(groups)} groups; {objective} = {value:.6f}."
    )
    return ThresholdPolicy(
        constraint=constraint,
        objective=objective,
        score_column=score_column,
        sensitive_columns=_sensitive_columns(sensitive),
        objective_value=value,
        groups=policies,
    )


def _expected(mixture: Sequence[MixtureComponent], scores: np.ndarray) -> np.ndarray:
    out = np.zeros(len(scores), dtype=np.float64)
    for component in mixture:
        rule = component.rule
        if rule.kind == "threshold":
            values = (scores > rule.param).astype(np.float64)
        else:
            values = np.full(len(scores), rule.param, dtype=np.float64)
        out += component.w * values
    return np.clip(out, 0.0, 1.0)


def _group_rows(policy: ThresholdPolicy, sensitive, n: int) -> Dict[GroupKey, np.ndarray]:
    labels = group_labels(sensitive)
    if len(labels) != n:
        raise ShapeError(f"sensitive has {len(labels)} rows but scores has {n}.")
    known = policy.group_map()
    rows: Dict[GroupKey, List[int]] = {}
    for i, key in enumerate(labels):
        if key not in known:
            raise PredictionError(f"Group {key} at row {i + 1} is not in the policy.", row=i + 1)
        rows.setdefault(key, []).append(i)
    return {key: np.asarray(idx, dtype=np.int64) for key, idx in rows.items()}


def expected_policy_predictions(policy: ThresholdPolicy, scores, sensitive) -> np.ndarray:
    """Analytic P(prediction = 1) per row under the policy, without sampling.

    Raises:
        PredictionError: If a row belongs to a group missing from the policy.
    """
    s = _scores(scores)
    out = np.zeros(len(s), dtype=np.float64)
    mixtures = policy.group_map()
    for key, rows in _group_rows(policy, sensitive, len(s)).items():
        out[rows] = _expected(mixtures[key].mixture, s[rows])
    return out


def predict_with_policy(
    policy: ThresholdPolicy, scores, sensitive, seed: int = settings.DEFAULT_SEED
) -> np.ndarray:
    """Samples binary predictions from the policy.

    Every row draws two uniforms in input order: the first picks a mixture
    component, the second drives a coin rule. Output is a pure function of
    the inputs and ``seed``.

    Raises:
        PredictionError: If a row belongs to a group missing from the policy.
    """
    s = _scores(scores)
    n = len(s)
    group_rows = _group_rows(policy, sensitive, n)
    draws = np.random.default_rng(seed).random((n, 2))
    out = np.zeros(n, dtype=np.int64)
    mixtures = policy.group_map()
    for key, rows in group_rows.items():
        mixture = mixtures[key].mixture
        cumulative = np.cumsum([c.w for c in mixture])
        chosen = np.searchsorted(cumulative, draws[rows, 0], side="right")
        chosen = np.minimum(chosen, len(mixture) - 1)
        for k, component in enumerate(mixture):
            picked = rows[chosen == k]
            rule = component.rule
            if rule.kind == "threshold":
                out[picked] = s[picked] > rule.param
            elif rule.kind == "constant":
                out[picked] = int(rule.param)
            else:
                out[picked] = draws[picked, 1] < rule.param
    return out


def policy_rates(policy: ThresholdPolicy, scores, y_true, sensitive) -> MetricFrameResult:
    """Analytic selection, true positive and false positive rates per group."""
    expected = expected_policy_predictions(policy, scores, sensitive)
    metrics = ["selection_rate"]
    if y_true is not None:
        metrics += ["true_positive_rate", "false_positive_rate"]
    return disaggregate(metrics, y_true, expected, sensitive)


def policy_objective(policy: ThresholdPolicy, scores, y_true, sensitive) -> float:
    """Analytic group-size weighted objective of the policy."""
    expected = expected_policy_predictions(policy, scores, sensitive)
    r = disaggregate([policy.objective], y_true, expected, sensitive)
    n = sum(r.group_sizes.values())
    return float(sum(g.n / n * g.values[policy.objective] for g in r.by_group))


def load_threshold_policy(source: Union[str, Path]) -> ThresholdPolicy:
    """Reads a threshold policy JSON artifact.

    Raises:
        ConfigError: If the file is unreadable or not a valid policy.
    """
    try:
        raw = json.loads(Path(source).read_text(encoding="utf-8"))
        return ThresholdPolicy.model_validate(raw)
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise ConfigError(f"Could not load policy {source}: {e}")
