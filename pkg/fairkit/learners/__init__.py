from typing import Dict, Type

from fairkit.core.exceptions import ConfigError, LearnerNotFound
from fairkit.core.models import ModelSpec
from fairkit.learners.base import BaseClassifier, BaseLearner
from fairkit.utils.logging import logger

from .constant import ConstantClassifier
from .logistic import LinearModel, LogisticRegressionLearner
from .stump import DecisionStump, DecisionStumpLearner

# Dictionary that maps learner kinds to learner classes
_LEARNERS: Dict[str, Type[BaseLearner]] = {
    "logistic_regression": LogisticRegressionLearner,
    "decision_stump": DecisionStumpLearner,
}

_ALIASES: Dict[str, str] = {
    "logreg": "logistic_regression",
    "stump": "decision_stump",
}

# Dictionary that maps serialized model kinds to classifier classes
_CLASSIFIERS: Dict[str, Type[BaseClassifier]] = {
    "logistic_regression": LinearModel,
    "decision_stump": DecisionStump,
    "constant": ConstantClassifier,
}


def get_learner(kind: str, **hyperparams) -> BaseLearner:
    """
    Factory function to get a base learner instance.

    Args:
        kind (str): Learner kind or alias (e.g., "logreg").
        **hyperparams: Keyword arguments of the learner (e.g., ``l2``).

    Returns:
        BaseLearner: An instance of the requested learner.

    Raises:
        LearnerNotFound: If the kind does not match any known learner.
        ConfigError: If a hyperparameter is not accepted by the learner.
    """
    learner_class = _LEARNERS.get(_ALIASES.get(kind, kind))
    if not learner_class:
        logger.error(f"Learner '{kind}' not found.")
        raise LearnerNotFound(kind)

    logger.debug(f"Instantiating learner '{kind}' with hyperparameters {hyperparams}.")
    try:
        return learner_class(**hyperparams)
    except TypeError as e:
        raise ConfigError(f"Invalid hyperparameters for learner '{kind}': {e}")


def list_available_learners() -> Dict[str, str]:
    """
    Lists all available base learners.

    Returns:
        Dict[str, str]: Learner kind mapped to a description.
    """
    descriptions = {
        "logistic_regression": "Weighted logistic regression (alias: logreg).",
        "decision_stump": "Weighted single-feature threshold rule (alias: stump).",
    }
    return {
        kind: descriptions.get(kind, kind.replace("_", " ").capitalize())
        for kind in _LEARNERS.keys()
    }


def load_classifier(spec: ModelSpec) -> BaseClassifier:
    """Rebuilds a trained classifier from its serialized form."""
    classifier_class = _CLASSIFIERS.get(spec.kind)
    if not classifier_class:
        raise ConfigError(f"Unknown model kind '{spec.kind}'.")
    try:
        return classifier_class.from_params(dict(spec.params))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Invalid parameters for model kind '{spec.kind}': {e}")


def train_weighted_learner(kind: str, X, y, sample_weight=None, **hyperparams) -> BaseClassifier:
    """Trains a learner of the given kind on weighted binary data."""
    return get_learner(kind, **hyperparams).fit(X, y, sample_weight)


__all__ = [
    "BaseClassifier",
    "BaseLearner",
    "ConstantClassifier",
    "DecisionStump",
    "DecisionStumpLearner",
    "LinearModel",
    "LogisticRegressionLearner",
    "get_learner",
    "list_available_learners",
    "load_classifier",
    "train_weighted_learner",
]
