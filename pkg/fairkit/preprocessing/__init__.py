from .correlation_remover import (
    CorrelationRemover,
    fit_correlation_remover,
    load_correlation_remover,
    transform,
)

__all__ = [
    "CorrelationRemover",
    "fit_correlation_remover",
    "load_correlation_remover",
    "transform",
]
