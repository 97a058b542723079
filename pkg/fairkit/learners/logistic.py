from typing import Any, Dict, Optional

import numpy as np
from scipy.special import expit, log_expit

from fairkit import settings
from fairkit.core.exceptions import ConfigError
from fairkit.learners.base import BaseClassifier, BaseLearner, as_feature_matrix, check_training_data
from fairkit.utils.logging import logger

# Halvings of the step allowed per epoch before giving up on descent.
_MAX_BACKTRACK = 40


class LinearModel(BaseClassifier):
    """Logistic model; predicts 1 iff ``sigmoid(w.x + b) > 0.5``."""

    kind = "logistic_regression"

    def __init__(self, weights, bias: float):
        self.weights = np.asarray(weights, dtype=np.float64).ravel()
        self.bias = float(bias)

    def decision_function(self, X) -> np.ndarray:
        return as_feature_matrix(X) @ self.weights + self.bias

    def predict_proba(self, X) -> np.ndarray:
        return expit(self.decision_function(X))

    def predict(self, X) -> np.ndarray:
        # sigmoid(z) > 0.5 exactly when z > 0
        return (self.decision_function(X) > 0).astype(np.int64)

    def params(self) -> Dict[str, Any]:
        return {"weights": [float(v) for v in self.weights], "bias": self.bias}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> "LinearModel":
        return cls(params["weights"], params["bias"])


class LogisticRegressionLearner(BaseLearner):
    """Weighted logistic regression trained by full-batch gradient descent.

    Minimizes the weight-normalized log-loss plus ``l2/2 * |w|^2`` (the bias
    is not penalized), starting from zero. Each epoch takes a gradient step
    of size ``step``, halved until the objective decreases (Armijo rule).
    Training stops once the gradient norm is at most ``tol`` or after
    ``max_epochs`` epochs, so fitting is deterministic.
    """

    kind = "logistic_regression"

    def __init__(
        self,
        l2: Optional[float] = None,
        max_epochs: Optional[int] = None,
        tol: Optional[float] = None,
        step: Optional[float] = None,
    ):
        self.l2 = settings.LOGISTIC_L2 if l2 is None else float(l2)
        self.max_epochs = settings.LOGISTIC_MAX_EPOCHS if max_epochs is None else int(max_epochs)
        self.tol = settings.LOGISTIC_TOL if tol is None else float(tol)
        self.step = settings.LOGISTIC_STEP if step is None else float(step)
        if self.l2 < 0:
            raise ConfigError(f"l2 must be non-negative, got {self.l2}.")
        if self.max_epochs < 1:
            raise ConfigError(f"max_epochs must be at least 1, got {self.max_epochs}.")
        if self.tol < 0 or self.step <= 0:
            raise ConfigError("tol must be non-negative and step positive.")

    def _objective(self, theta, X, y, w) -> float:
        z = X @ theta[:-1] + theta[-1]
        # log-loss = -[y log s(z) + (1-y) log s(-z)]
        loss = -np.sum(w * (y * log_expit(z) + (1.0 - y) * log_expit(-z)))
        return float(loss + 0.5 * self.l2 * np.dot(theta[:-1], theta[:-1]))

    def _gradient(self, theta, X, y, w) -> np.ndarray:
        residual = w * (expit(X @ theta[:-1] + theta[-1]) - y)
        grad = np.empty_like(theta)
        grad[:-1] = X.T @ residual + self.l2 * theta[:-1]
        grad[-1] = np.sum(residual)
        return grad

    def fit(self, X, y, sample_weight=None) -> LinearModel:
        X, y, w = check_training_data(X, y, sample_weight)
        w = w / np.sum(w)
        theta = np.zeros(X.shape[1] + 1, dtype=np.float64)

        epoch = 0
        loss = self._objective(theta, X, y, w)
        for epoch in range(1, self.max_epochs + 1):
            grad = self._gradient(theta, X, y, w)
            norm_sq = float(np.dot(grad, grad))
            if np.sqrt(norm_sq) <= self.tol:
                break
            t = self.step
            for _ in range(_MAX_BACKTRACK):
                candidate = theta - t * grad
                candidate_loss = self._objective(candidate, X, y, w)
                if candidate_loss <= loss - 0.5 * t * norm_sq:
                    break
                t *= 0.5
            else:
                break
            theta, loss = candidate, candidate_loss

        logger.debug(f"Logistic regression stopped after {epoch} epochs with loss {loss:.6g}.")
        return LinearModel(theta[:-1], theta[-1])
