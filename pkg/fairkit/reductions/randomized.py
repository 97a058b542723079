import json
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError

from fairkit import settings
from fairkit.core.exceptions import ConfigError
from fairkit.core.models import (
    RandomizedClassifierSpec,
    RandomizedComponent,
    SolverDiagnostics,
)
from fairkit.learners import BaseClassifier, load_classifier
from fairkit.learners.base import as_feature_matrix

PREDICT_MODES = ("expectation", "sample")


def merge_components(
    components: Sequence[Tuple[float, BaseClassifier]],
) -> List[Tuple[float, BaseClassifier]]:
    """Sums the weights of equal classifiers, keeping first-appearance order."""
    merged: List[Tuple[float, BaseClassifier]] = []
    for weight, classifier in components:
        for k, (w, existing) in enumerate(merged):
            if existing == classifier:
                merged[k] = (w + weight, existing)
                break
        else:
            merged.append((weight, classifier))
    return merged


class RandomizedClassifier:
    """Weighted mixture of deterministic base classifiers.

    Attributes:
        components: ``(weight, classifier)`` pairs; weights sum to 1.
        features: Ordered feature column names the classifiers read.
        constraint: Name of the constraint family it was fitted under.
        eps: Constraint slack it was fitted with.
        diagnostics: Solver diagnostics, if fitted by the solver.
    """

    def __init__(
        self,
        components: Sequence[Tuple[float, BaseClassifier]],
        features: Optional[Sequence[str]] = None,
        constraint: Optional[str] = None,
        eps: Optional[float] = None,
        diagnostics: Optional[SolverDiagnostics] = None,
    ):
        if not components:
            raise ConfigError("A randomized classifier needs at least one component.")
        weights = [float(w) for w, _ in components]
        if any(not math.isfinite(w) or w < 0 for w in weights):
            raise ConfigError("Component weights must be finite and non-negative.")
        total = math.fsum(weights)
        if abs(total - 1.0) > settings.WEIGHT_TOLERANCE:
            raise ConfigError(f"Component weights must sum to 1, got {total!r}.")
        self.components = [(float(w), c) for w, c in components]
        self.features = list(features or [])
        self.constraint = constraint
        self.eps = eps
        self.diagnostics = diagnostics

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components], dtype=np.float64)

    @property
    def classifiers(self) -> List[BaseClassifier]:
        return [c for _, c in self.components]

    def component_predictions(self, X) -> np.ndarray:
        """0/1 predictions of every component, one row per component."""
        X = as_feature_matrix(X)
        return np.vstack([c.predict(X) for c in self.classifiers]).astype(np.float64)

    def predict_expectation(self, X) -> np.ndarray:
        """Expected prediction ``sum_i w_i h_i(x)`` per row, in [0, 1]."""
        return np.clip(self.weights @ self.component_predictions(X), 0.0, 1.0)

    def predict_sample(self, X, seed: int = settings.DEFAULT_SEED) -> np.ndarray:
        """Draws one component per row, consuming the random stream in row order."""
        predictions = self.component_predictions(X)
        n = predictions.shape[1]
        rng = np.random.default_rng(seed)
        cumulative = np.cumsum(self.weights)
        chosen = np.searchsorted(cumulative, rng.random(n), side="right")
        chosen = np.minimum(chosen, len(cumulative) - 1)
        return predictions[chosen, np.arange(n)].astype(np.int64)

    def to_spec(self) -> RandomizedClassifierSpec:
        return RandomizedClassifierSpec(
            features=self.features,
            constraint=self.constraint,
            eps=self.eps,
            components=[RandomizedComponent(w=w, model=c.to_spec()) for w, c in self.components],
            diagnostics=self.diagnostics,
        )

    @classmethod
    def from_spec(cls, spec: RandomizedClassifierSpec) -> "RandomizedClassifier":
        return cls(
            [(c.w, load_classifier(c.model)) for c in spec.components],
            features=spec.features,
            constraint=spec.constraint,
            eps=spec.eps,
            diagnostics=spec.diagnostics,
        )

    def __repr__(self) -> str:
        return f"RandomizedClassifier(components={self.components})"


def predict_randomized(
    q: RandomizedClassifier,
    X,
    mode: str = "expectation",
    seed: int = settings.DEFAULT_SEED,
) -> np.ndarray:
    """Predicts with a randomized classifier.

    Args:
        q (RandomizedClassifier): The mixture.
        X: Feature matrix.
        mode (str): ``"expectation"`` returns ``sum_i w_i h_i(x)``;
            ``"sample"`` draws one component per row with ``seed``.
        seed (int): Seed of the sampling stream.

    Raises:
        ConfigError: If the mode is unknown.
    """
    if mode == "expectation":
        return q.predict_expectation(X)
    if mode == "sample":
        return q.predict_sample(X, seed)
    raise ConfigError(f"Unknown prediction mode '{mode}'. Use one of {list(PREDICT_MODES)}.")


def load_randomized_classifier(source: Union[str, Path]) -> RandomizedClassifier:
    """Reads a randomized classifier JSON artifact.

    Raises:
        ConfigError: If the file is unreadable or not a valid artifact.
    """
    try:
        raw = json.loads(Path(source).read_text(encoding="utf-8"))
        return RandomizedClassifier.from_spec(RandomizedClassifierSpec.model_validate(raw))
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise ConfigError(f"Could not load model {source}: {e}")
