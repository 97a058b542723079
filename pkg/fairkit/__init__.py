__version__ = "0.1.0"

# This file exposes the main public API, such as `disaggregate` and the mitigators.
from .core.models import MetricFrameResult, RandomizedClassifierSpec, Report, ThresholdPolicy
from .data import Dataset, generate_synthetic, load_table, validate_dataset, write_csv
from .learners import get_learner
from .metrics import (
    demographic_parity_difference,
    disaggregate,
    equalized_odds_difference,
    make_derived_metric,
)
from .postprocessing import fit_threshold_optimizer, predict_with_policy
from .preprocessing import CorrelationRemover, fit_correlation_remover
from .reductions import exponentiated_gradient, predict_randomized
from .report import compare_models, render_report

__all__ = [
    "__version__",
    "CorrelationRemover",
    "Dataset",
    "MetricFrameResult",
    "RandomizedClassifierSpec",
    "Report",
    "ThresholdPolicy",
    "compare_models",
    "demographic_parity_difference",
    "disaggregate",
    "equalized_odds_difference",
    "exponentiated_gradient",
    "fit_correlation_remover",
    "fit_threshold_optimizer",
    "generate_synthetic",
    "get_learner",
    "load_table",
    "make_derived_metric",
    "predict_randomized",
    "predict_with_policy",
    "render_report",
    "validate_dataset",
    "write_csv",
]
