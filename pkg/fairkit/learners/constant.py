from typing import Any, Dict

import numpy as np

from fairkit.core.exceptions import ConfigError
from fairkit.learners.base import BaseClassifier, as_feature_matrix


class ConstantClassifier(BaseClassifier):
    """Predicts the same label for every row."""

    kind = "constant"

    def __init__(self, value: int):
        if value not in (0, 1):
            raise ConfigError(f"A constant classifier predicts 0 or 1, got {value!r}.")
        self.value = int(value)

    def predict(self, X) -> np.ndarray:
        return np.full(as_feature_matrix(X).shape[0], self.value, dtype=np.int64)

    def params(self) -> Dict[str, Any]:
        return {"value": self.value}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> "ConstantClassifier":
        return cls(params["value"])
