import itertools
from typing import Any, Dict, List

import numpy as np
import pytest

from fairkit.core.models import SyntheticConfig
from fairkit.data import generate_synthetic
from fairkit.learners.base import BaseClassifier, BaseLearner, as_feature_matrix, check_training_data
from fairkit.utils.logging import logger


class LookupClassifier(BaseClassifier):
    """Predicts ``labels[row id]`` where the row id is feature 0."""

    kind = "lookup"

    def __init__(self, labels):
        self.labels = [int(v) for v in labels]

    def predict(self, X) -> np.ndarray:
        ids = as_feature_matrix(X)[:, 0].astype(np.int64)
        return np.asarray(self.labels, dtype=np.int64)[ids]

    def params(self) -> Dict[str, Any]:
        return {"labels": self.labels}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> "LookupClassifier":
        return cls(params["labels"])


class EnumerationLearner(BaseLearner):
    """Exact cost-sensitive learner: tries every labelling of the training rows.

    Rows must carry their index ``0..n-1`` as feature 0. Ties go to the first
    labelling in lexicographic order.
    """

    kind = "lookup"

    def fit(self, X, y, sample_weight=None) -> LookupClassifier:
        X, y, w = check_training_data(X, y, sample_weight)
        labellings = np.array(list(itertools.product([0, 1], repeat=len(y))), dtype=np.float64)
        errors = (labellings != y).astype(np.float64) @ w
        best = int(np.flatnonzero(errors <= errors.min() + 1e-12)[0])
        return LookupClassifier(labellings[best])


@pytest.fixture
def log_messages():
    """Collects loguru messages emitted during the test."""
    messages: List[str] = []
    sink_id = logger.add(lambda message: messages.append(message.record["message"]), level="DEBUG")
    yield messages
    logger.remove(sink_id)


@pytest.fixture
def toy_labels():
    """Five rows in two groups; see the metric tests for hand-computed values."""
    y_true = np.array([1, 0, 1, 0, 1])
    y_pred = np.array([1, 1, 0, 0, 1])
    sensitive = np.array(["a", "a", "b", "b", "b"])
    return y_true, y_pred, sensitive


@pytest.fixture
def synthetic_dataset():
    config = SyntheticConfig(
        n_rows=2000,
        group_weights={"a": 0.5, "b": 0.3, "c": 0.2},
        base_rates={"a": 0.7, "b": 0.4, "c": 0.2},
        score_noise=0.2,
        seed=7,
        n_features=2,
    )
    return generate_synthetic(config)
