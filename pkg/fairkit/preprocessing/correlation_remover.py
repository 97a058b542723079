import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from fairkit.core.exceptions import ColumnTypeError, ConfigError, DataValueError, SchemaError
from fairkit.core.models import CorrelationRemoverModel
from fairkit.utils.logging import logger


def _require_columns(X: pd.DataFrame, columns: Sequence[str]) -> None:
    for name in columns:
        if name not in X.columns:
            raise SchemaError(f"Column '{name}' is not in the input.", column=name)


def _numeric_block(X: pd.DataFrame, columns: Sequence[str]) -> np.ndarray:
    block = np.empty((len(X), len(columns)), dtype=np.float64)
    for j, name in enumerate(columns):
        values = pd.to_numeric(X[name], errors="coerce")
        if values.isna().any():
            raise ColumnTypeError(
                f"Column '{name}' is not numeric and cannot be decorrelated.", column=name
            )
        block[:, j] = values.to_numpy(dtype=np.float64)
    if not np.all(np.isfinite(block)):
        raise DataValueError("Columns to decorrelate must hold finite values.")
    return block


def _is_numeric(series: pd.Series) -> bool:
    return series.dtype.kind in "biuf"


def _encode_sensitive(
    X: pd.DataFrame, sensitive_cols: Sequence[str], categories: Dict[str, List[str]]
) -> np.ndarray:
    """One-hot encodes categorical sensitive columns, dropping their first level."""
    blocks = []
    for name in sensitive_cols:
        if name not in categories:
            blocks.append(_numeric_block(X, [name]))
            continue
        values = X[name].astype(str)
        unseen = sorted(set(values) - set(categories[name]))
        if unseen:
            raise SchemaError(
                f"Sensitive column '{name}' has levels {unseen} not seen during fit.",
                column=name,
            )
        levels = categories[name][1:]
        block = np.zeros((len(X), len(levels)), dtype=np.float64)
        for j, level in enumerate(levels):
            block[:, j] = (values == level).to_numpy()
        blocks.append(block)
    return np.hstack(blocks)


def fit_correlation_remover(
    X: pd.DataFrame,
    sensitive_cols: Sequence[str],
    alpha: float = 1.0,
    features: Optional[Sequence[str]] = None,
) -> CorrelationRemoverModel:
    """Fits the linear map that removes correlation with the sensitive columns.

    Numeric sensitive columns are used as they are; categorical ones are
    one-hot encoded without their first (sorted) level. With ``S`` the
    encoded sensitive block, ``mu`` its column means and ``Z`` the columns to
    decorrelate, ``W`` is the minimum-norm least-squares solution of
    ``(S - mu) W = Z``, so rank-deficient encodings give a valid model.

    Args:
        X (pd.DataFrame): Fitting data.
        sensitive_cols (Sequence[str]): Sensitive column names.
        alpha (float): Blend in [0, 1]; 1 removes the correlation fully.
        features: Columns to decorrelate. Defaults to every other column.

    Returns:
        CorrelationRemoverModel: The fitted model.

    Raises:
        SchemaError: Unknown column names.
        ColumnTypeError: A column to decorrelate is not numeric.
        DataValueError: Fewer than 2 rows.
        ConfigError: ``alpha`` outside [0, 1] or no sensitive column.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha must lie in [0, 1], got {alpha}.")
    sensitive_cols = list(sensitive_cols)
    if not sensitive_cols:
        raise ConfigError("At least one sensitive column is required.")
    _require_columns(X, sensitive_cols)
    if features is None:
        features = [str(c) for c in X.columns if c not in sensitive_cols]
    features = list(features)
    _require_columns(X, features)
    overlap = sorted(set(features) & set(sensitive_cols))
    if overlap:
        raise ConfigError(f"Columns {overlap} are both sensitive and to be decorrelated.")
    if len(X) < 2:
        raise DataValueError(f"Correlation removal needs at least 2 rows, got {len(X)}.")

    Z = _numeric_block(X, features)
    categories: Dict[str, List[str]] = {}
    encoded: List[str] = []
    for name in sensitive_cols:
        if _is_numeric(X[name]):
            encoded.append(name)
        else:
            categories[name] = sorted(set(X[name].astype(str)))
            encoded.extend(f"{name}={level}" for level in categories[name][1:])
    S = _encode_sensitive(X, sensitive_cols, categories)
    means = S.mean(axis=0)
    if S.shape[1] == 0:
        # Every sensitive column has a single level: nothing to remove.
        coefficients, rank = np.zeros((0, Z.shape[1])), 0
    else:
        coefficients, _, rank, _ = np.linalg.lstsq(S - means, Z, rcond=None)
    if rank < S.shape[1]:
        logger.info(
            f"Sensitive encoding has rank {rank} < {S.shape[1]}; using the minimum-norm solution."
        )
    logger.debug(f"Fitted correlation remover on {len(X)} rows and columns {features}.")

    return CorrelationRemoverModel(
        alpha=alpha,
        sensitive_means=[float(v) for v in means],
        coefficients=[[float(v) for v in row] for row in coefficients.reshape(S.shape[1], len(features))],
        sensitive_cols=sensitive_cols,
        passthrough_cols=features,
        encoded_cols=encoded,
        categories=categories,
    )


def transform(m: CorrelationRemoverModel, X: pd.DataFrame) -> pd.DataFrame:
    """Applies a fitted correlation remover.

    Returns the decorrelated columns only, in fitting order:
    ``Z' = alpha * (Z - (S - mu) W) + (1 - alpha) * Z``. Sensitive columns
    are dropped.

    Raises:
        SchemaError: Missing columns or unseen sensitive levels.
        ColumnTypeError: A column to decorrelate is not numeric.
    """
    _require_columns(X, m.sensitive_cols + m.passthrough_cols)
    Z = _numeric_block(X, m.passthrough_cols)
    S = _encode_sensitive(X, m.sensitive_cols, m.categories)
    means = np.asarray(m.sensitive_means, dtype=np.float64)
    W = np.asarray(m.coefficients, dtype=np.float64).reshape(len(means), len(m.passthrough_cols))
    residual = Z - (S - means) @ W
    out = m.alpha * residual + (1.0 - m.alpha) * Z
    return pd.DataFrame(out, columns=m.passthrough_cols, index=X.index)


def load_correlation_remover(source: Union[str, Path]) -> CorrelationRemoverModel:
    """Reads a correlation remover JSON artifact.

    Raises:
        ConfigError: If the file is unreadable or not a valid model.
    """
    try:
        raw = json.loads(Path(source).read_text(encoding="utf-8"))
        return CorrelationRemoverModel.model_validate(raw)
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise ConfigError(f"Could not load correlation remover {source}: {e}")


class CorrelationRemover:
    """Transformer wrapper around ``fit_correlation_remover`` and ``transform``."""

    def __init__(self, sensitive_cols: Sequence[str], alpha: float = 1.0):
        self.sensitive_cols = list(sensitive_cols)
        self.alpha = alpha
        self.model_: Optional[CorrelationRemoverModel] = None

    def fit(self, X: pd.DataFrame, features: Optional[Sequence[str]] = None) -> "CorrelationRemover":
        self.model_ = fit_correlation_remover(X, self.sensitive_cols, self.alpha, features)
        return self

    def transform(self, X: pd.DataFrame) -> pd.DataFrame:
        if self.model_ is None:
            raise ConfigError("CorrelationRemover must be fitted before transform.")
        return transform(self.model_, X)

    def fit_transform(self, X: pd.DataFrame, features: Optional[Sequence[str]] = None) -> pd.DataFrame:
        return self.fit(X, features).transform(X)
