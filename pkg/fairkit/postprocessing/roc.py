import math
from typing import Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

from fairkit.core.exceptions import DegenerateGroupError, ShapeError


class RocPoint(NamedTuple):
    """Operating point of the rule "predict 1 iff score > threshold"."""

    fpr: float
    tpr: float
    threshold: float


def threshold_table(scores, y_true) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """True and false positive counts of every distinct threshold rule.

    Thresholds run from ``+inf`` (predict nothing) through the distinct
    scores in decreasing order to ``-inf`` (predict everything).

    Returns:
        Tuple of thresholds, true positive counts and false positive counts.
    """
    s = np.asarray(scores, dtype=np.float64).ravel()
    y = np.asarray(y_true, dtype=np.float64).ravel()
    if len(s) != len(y):
        raise ShapeError(f"scores has {len(s)} rows but y_true has {len(y)}.")
    values, inverse = np.unique(s, return_inverse=True)
    # np.unique sorts ascending; reverse to walk thresholds downwards.
    positives = np.bincount(inverse, weights=y, minlength=len(values))[::-1]
    negatives = np.bincount(inverse, weights=1.0 - y, minlength=len(values))[::-1]
    tp = np.concatenate([[0.0, 0.0], np.cumsum(positives)[:-1], [y.sum()]])
    fp = np.concatenate([[0.0, 0.0], np.cumsum(negatives)[:-1], [len(y) - y.sum()]])
    thresholds = np.concatenate([[np.inf], values[::-1], [-np.inf]])
    if len(values) == 0:
        tp, fp, thresholds = np.zeros(2), np.zeros(2), np.array([np.inf, -np.inf])
    return thresholds, tp, fp


def roc_points(scores, y_true, group=None) -> List[RocPoint]:
    """Enumerates the ROC points of all threshold rules on one group.

    Points come in order of decreasing threshold, from ``(0, 0)`` at
    ``+inf`` to ``(1, 1)`` at ``-inf``. A point reached by several
    thresholds is listed once, with the largest threshold.

    Raises:
        DegenerateGroupError: If the group lacks positives or negatives.
    """
    y = np.asarray(y_true, dtype=np.float64).ravel()
    n_pos = float(y.sum())
    n_neg = float(len(y) - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise DegenerateGroupError(
            group, f"Group {group} needs positive and negative examples for a ROC curve."
        )
    thresholds, tp, fp = threshold_table(scores, y)
    points: List[RocPoint] = []
    seen = set()
    for theta, t, f in zip(thresholds, tp, fp):
        key = (f / n_neg, t / n_pos)
        if key in seen:
            continue
        seen.add(key)
        points.append(RocPoint(key[0], key[1], float(theta)))
    return points


def upper_envelope(points: Iterable[Tuple[float, float, float]]) -> List[Tuple[float, float, float]]:
    """Upper concave envelope of ``(x, y, payload)`` points, by increasing x.

    Only the highest point of each x survives (the first one listed on ties).
    Collinear interior points are removed.
    """
    indexed = sorted(enumerate(points), key=lambda item: (item[1][0], -item[1][1], item[0]))
    candidates = []
    for _, point in indexed:
        if candidates and candidates[-1][0] == point[0]:
            continue
        candidates.append(tuple(point))

    hull: List[Tuple[float, float, float]] = []
    for p in candidates:
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def locate(xs: np.ndarray, x: float) -> Tuple[int, float]:
    """Segment ``[xs[k], xs[k+1]]`` containing ``x`` and the weight of its right end.

    Returns ``(k, 0.0)`` when ``x`` sits on vertex ``k``.
    """
    if len(xs) == 1:
        return 0, 0.0
    k = int(np.searchsorted(xs, x, side="right")) - 1
    k = min(max(k, 0), len(xs) - 2)
    if x <= xs[k]:
        return k, 0.0
    if x >= xs[k + 1]:
        return k + 1, 0.0
    return k, float((x - xs[k]) / (xs[k + 1] - xs[k]))


class RocHull:
    """Upper concave boundary of a group's achievable ROC region.

    Vertices have strictly increasing false positive rate and end at
    ``(1, 1)``; the first vertex has false positive rate 0. Every point on
    the boundary is reached by mixing two adjacent vertex rules.
    """

    def __init__(self, vertices: Sequence[RocPoint]):
        self.vertices = [RocPoint(*v) for v in vertices]
        self.fprs = np.array([v.fpr for v in self.vertices], dtype=np.float64)
        self.tprs = np.array([v.tpr for v in self.vertices], dtype=np.float64)
        self.thresholds = [v.threshold for v in self.vertices]

    def tpr_at(self, fpr):
        """Boundary true positive rate at ``fpr``: concave and nondecreasing."""
        return np.interp(fpr, self.fprs, self.tprs)

    def segment(self, fpr: float) -> Tuple[int, float]:
        return locate(self.fprs, fpr)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"RocHull({[(v.fpr, v.tpr) for v in self.vertices]})"


def upper_convex_hull(points: Iterable) -> RocHull:
    """Upper convex hull in ROC space of ``(fpr, tpr)`` or ``(fpr, tpr, threshold)`` points.

    Points without a threshold get ``nan``.
    """
    full = [tuple(p) if len(p) == 3 else (p[0], p[1], math.nan) for p in points]
    return RocHull([RocPoint(*p) for p in upper_envelope(full)])
