import json
from pathlib import Path
from typing import Any, Mapping, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from fairkit.core.exceptions import ConfigError
from fairkit.core.models import SyntheticConfig
from fairkit.data.dataset import Dataset
from fairkit.utils.logging import logger

SENSITIVE_COLUMN = "group"


def load_synthetic_config(source: Union[str, Path, Mapping[str, Any]]) -> SyntheticConfig:
    """Builds a SyntheticConfig from a JSON file path or an already parsed mapping.

    Raises:
        ConfigError: If the file cannot be read, is not JSON, has unknown keys
            or holds invalid probabilities.
    """
    if isinstance(source, Mapping):
        raw = dict(source)
    else:
        try:
            raw = json.loads(Path(source).read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError(f"Could not read synthetic config {source}: {e}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"Synthetic config {source} is not valid JSON: {e}")
    try:
        return SyntheticConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"Invalid synthetic config: {e}")


def generate_synthetic(config: Union[SyntheticConfig, Mapping[str, Any]]) -> Dataset:
    """Draws a labelled, scored dataset with per-group base rates.

    Columns, in order: ``y_true``, ``score``, ``group`` (sensitive), ``y_pred``
    and, when ``n_features > 0``, numeric features ``x0..x{k-1}``. The output
    is a pure function of ``config``: the same seed gives the same Dataset.
    Extra features are drawn after every core column, so adding them never
    changes the core columns.

    Args:
        config: A SyntheticConfig or a mapping with the same keys.

    Returns:
        Dataset: The generated table.

    Raises:
        ConfigError: If the configuration is invalid.
    """
    if not isinstance(config, SyntheticConfig):
        config = load_synthetic_config(config)

    labels = sorted(config.group_weights)
    probabilities = np.array([config.group_weights[g] for g in labels], dtype=np.float64)
    probabilities = probabilities / probabilities.sum()
    rates = np.array([config.base_rates[g] for g in labels], dtype=np.float64)

    rng = np.random.default_rng(config.seed)
    n = config.n_rows
    index = rng.choice(len(labels), size=n, p=probabilities)
    y_true = (rng.random(n) < rates[index]).astype(np.int64)
    noise = rng.normal(0.0, config.score_noise, size=n)
    score = np.clip(y_true * 0.5 + 0.25 + noise, 0.0, 1.0)
    y_pred = (score > 0.5).astype(np.int64)

    columns = {
        "y_true": y_true,
        "score": score,
        SENSITIVE_COLUMN: np.array([labels[i] for i in index], dtype=object),
        "y_pred": y_pred,
    }
    for j in range(config.n_features):
        columns[f"x{j}"] = y_true + 0.5 * index + rng.normal(0.0, 1.0, size=n)

    roles = {
        "y_true": "y_true",
        "score": "score",
        SENSITIVE_COLUMN: "sensitive",
        "y_pred": "y_pred",
    }
    logger.debug(
        f"Generated {n} synthetic rows over groups {labels} with seed {config.seed}."
    )
    return Dataset(pd.DataFrame(columns), roles)
