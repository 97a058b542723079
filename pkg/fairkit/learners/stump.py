from typing import Any, Dict

import numpy as np

from fairkit.core.exceptions import ShapeError
from fairkit.learners.base import BaseClassifier, BaseLearner, as_feature_matrix, check_training_data

# Errors closer than this count as a tie.
_TIE_TOLERANCE = 1e-12


class DecisionStump(BaseClassifier):
    """One-feature threshold rule.

    Polarity +1 predicts 1 iff ``x[feature] > threshold``; polarity -1
    predicts 1 iff ``x[feature] <= threshold``.
    """

    kind = "decision_stump"

    def __init__(self, feature: int, threshold: float, polarity: int):
        self.feature = int(feature)
        self.threshold = float(threshold)
        self.polarity = int(polarity)

    def predict(self, X) -> np.ndarray:
        above = as_feature_matrix(X)[:, self.feature] > self.threshold
        if self.polarity < 0:
            above = ~above
        return above.astype(np.int64)

    def params(self) -> Dict[str, Any]:
        return {"feature": self.feature, "threshold": self.threshold, "polarity": self.polarity}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> "DecisionStump":
        return cls(params["feature"], params["threshold"], params["polarity"])


class DecisionStumpLearner(BaseLearner):
    """Exhaustive search over (feature, threshold, polarity) for the least weighted 0-1 error.

    Candidate thresholds are the distinct values of each feature; the largest
    one makes the stump constant. Ties go to the lowest feature index, then
    the lowest threshold, then polarity +1.
    """

    kind = "decision_stump"

    def fit(self, X, y, sample_weight=None) -> DecisionStump:
        X, y, w = check_training_data(X, y, sample_weight)
        if X.shape[1] == 0:
            raise ShapeError("A decision stump needs at least one feature.")
        best = None
        best_error = np.inf
        for j in range(X.shape[1]):
            values, inverse = np.unique(X[:, j], return_inverse=True)
            pos = np.bincount(inverse, weights=w * y, minlength=len(values))
            neg = np.bincount(inverse, weights=w * (1.0 - y), minlength=len(values))
            pos_below = np.cumsum(pos)
            neg_below = np.cumsum(neg)
            pos_total, neg_total = pos_below[-1], neg_below[-1]

            # polarity +1 misses positives at or below the threshold and
            # accepts negatives above it; polarity -1 is the complement.
            error_up = pos_below + (neg_total - neg_below)
            error_down = neg_below + (pos_total - pos_below)
            errors = np.column_stack([error_up, error_down]).ravel()
            k = int(np.flatnonzero(errors <= errors.min() + _TIE_TOLERANCE)[0])
            if errors[k] < best_error - _TIE_TOLERANCE:
                best_error = float(errors[k])
                best = DecisionStump(j, values[k // 2], 1 if k % 2 == 0 else -1)
        return best
