from .exponentiated_gradient import (
    Lagrangian,
    best_response,
    exponentiated_gradient,
    fit_exponentiated_gradient,
    make_constraint,
)
from .moments import CompiledConstraint, ConstraintSpec, MomentTerm, moment_violations
from .randomized import (
    PREDICT_MODES,
    RandomizedClassifier,
    load_randomized_classifier,
    merge_components,
    predict_randomized,
)

__all__ = [
    "CompiledConstraint",
    "ConstraintSpec",
    "Lagrangian",
    "MomentTerm",
    "PREDICT_MODES",
    "RandomizedClassifier",
    "best_response",
    "exponentiated_gradient",
    "fit_exponentiated_gradient",
    "load_randomized_classifier",
    "make_constraint",
    "merge_components",
    "moment_violations",
    "predict_randomized",
]
