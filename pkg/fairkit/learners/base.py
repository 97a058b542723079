from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Tuple

import numpy as np

from fairkit.core.exceptions import DataValueError, ShapeError, WeightError
from fairkit.core.models import ModelSpec


def as_feature_matrix(X) -> np.ndarray:
    """Converts features to a finite 2-D float matrix.

    Raises:
        DataValueError: If a feature value is not a finite number.
    """
    try:
        matrix = np.asarray(X, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise DataValueError(f"Features must be numeric: {e}")
    if matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    if matrix.ndim != 2:
        raise ShapeError("Features must form a 2-D matrix.")
    if not np.all(np.isfinite(matrix)):
        raise DataValueError("Features contain non-finite values.")
    return matrix


def check_training_data(
    X, y, sample_weight: Optional[Any] = None
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Validates a weighted binary training set.

    Returns:
        Tuple of the feature matrix, 0/1 labels as floats and weights.

    Raises:
        DataValueError: Non-finite features or non-binary labels.
        ShapeError: Length mismatch.
        WeightError: Negative, non-finite or all-zero weights.
    """
    matrix = as_feature_matrix(X)
    labels = np.asarray(y, dtype=np.float64).ravel()
    n = matrix.shape[0]
    if len(labels) != n:
        raise ShapeError(f"y has {len(labels)} rows but X has {n}.")
    if not np.all(np.isin(labels, (0.0, 1.0))):
        raise DataValueError("Training labels must be 0 or 1.")
    if sample_weight is None:
        weights = np.ones(n, dtype=np.float64)
    else:
        weights = np.asarray(sample_weight, dtype=np.float64).ravel()
        if len(weights) != n:
            raise ShapeError(f"sample_weight has {len(weights)} rows but X has {n}.")
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise WeightError("Sample weights must be finite and non-negative.")
    if not np.any(weights > 0):
        raise WeightError("Sample weights are all zero.")
    return matrix, labels, weights


class BaseClassifier(ABC):
    """A trained deterministic binary classifier."""

    kind: str = ""

    @abstractmethod
    def predict(self, X) -> np.ndarray:
        """Returns 0/1 predictions as an int64 vector."""
        pass

    @abstractmethod
    def params(self) -> Dict[str, Any]:
        """JSON-compatible parameters that rebuild this classifier."""
        pass

    @classmethod
    @abstractmethod
    def from_params(cls, params: Dict[str, Any]) -> "BaseClassifier":
        pass

    def to_spec(self) -> ModelSpec:
        return ModelSpec(kind=self.kind, params=self.params())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BaseClassifier):
            return NotImplemented
        return self.kind == other.kind and self.params() == other.params()

    def __hash__(self) -> int:
        return hash((self.kind, repr(self.params())))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.params()})"


class BaseLearner(ABC):
    """Trains a BaseClassifier on weighted binary data."""

    kind: str = ""

    @abstractmethod
    def fit(self, X, y, sample_weight=None) -> BaseClassifier:
        pass
