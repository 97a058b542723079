import re
from typing import List, Optional

import numpy as np
import pandas as pd

from fairkit.core.exceptions import ConfigError, DataValueError, MissingValueError

from .logging import logger

# Decimal point only; ``1,5`` is not a number. ``inf``/``nan`` parse so that
# validation can report them as non-finite instead of as malformed text.
_REAL_PATTERN = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?|[+-]?(?i:inf|infinity|nan)"
_REAL_RE = re.compile(_REAL_PATTERN)
_BINARY = {"0": 0, "1": 1, "0.0": 0, "1.0": 1}


def parse_column_list(value: Optional[str]) -> List[str]:
    """Parses a comma separated list of column or metric names.

    Args:
        value (Optional[str]): Text such as ``"accuracy, selection_rate"``.

    Returns:
        List[str]: The stripped, non-empty names in their original order.

    Raises:
        ConfigError: If an item is empty or a name is repeated.
    """
    if value is None:
        return []
    names = [part.strip() for part in value.split(",")]
    if any(not name for name in names):
        raise ConfigError(f"Empty name in list '{value}'.")
    if len(set(names)) != len(names):
        raise ConfigError(f"Repeated name in list '{value}'.")
    return names


def parse_real(text: Optional[str]) -> Optional[float]:
    """Parses a decimal-point number. Returns None if the text is not a number."""
    if text is None:
        return None
    cleaned = text.strip()
    if not _REAL_RE.fullmatch(cleaned):
        return None
    return float(cleaned)


def parse_binary(text: Optional[str]) -> Optional[int]:
    """Parses a 0/1 label. Returns None for any other value."""
    if text is None:
        return None
    return _BINARY.get(text.strip())


def _first_bad_row(mask: pd.Series) -> int:
    # 1-based data row number (the header is not counted).
    return int(np.flatnonzero(mask.to_numpy())[0]) + 1


def check_no_missing(series: pd.Series, column: str) -> None:
    """Raises MissingValueError naming the first empty cell of ``series``."""
    missing = series.isna() | (series.astype(str).str.strip() == "")
    if missing.any():
        row = _first_bad_row(missing)
        raise MissingValueError(
            f"Column '{column}' has a missing value at row {row}.",
            column=column,
            row=row,
        )


def is_real_column(series: pd.Series) -> bool:
    """True when every cell of a text column parses as a decimal number."""
    return bool(series.astype(str).str.strip().str.fullmatch(_REAL_PATTERN).all())


def parse_real_column(series: pd.Series, column: str) -> np.ndarray:
    """Converts a text column to float64, naming the first malformed cell.

    Args:
        series (pd.Series): Raw CSV cells.
        column (str): Column name used in error messages.

    Returns:
        np.ndarray: Parsed values; conversion goes through ``float()`` so
        values written with the shortest round-trip representation reload
        bit-exactly.

    Raises:
        MissingValueError: If a cell is empty.
        DataValueError: If a cell is not a decimal-point number.
    """
    check_no_missing(series, column)
    text = series.astype(str).str.strip()
    bad = ~text.str.fullmatch(_REAL_PATTERN)
    if bad.any():
        row = _first_bad_row(bad)
        raise DataValueError(
            f"Column '{column}' has non-numeric value '{text.iloc[row - 1]}' at row {row}.",
            column=column,
            row=row,
        )
    return text.astype(float).to_numpy(dtype=np.float64)


def parse_binary_column(series: pd.Series, column: str) -> np.ndarray:
    """Converts a text column of 0/1 labels to int64, naming the first bad cell."""
    check_no_missing(series, column)
    text = series.astype(str).str.strip()
    bad = ~text.isin(list(_BINARY))
    if bad.any():
        row = _first_bad_row(bad)
        value = text.iloc[row - 1]
        logger.debug(f"Rejecting non-binary value '{value}' in column '{column}'.")
        raise DataValueError(
            f"Column '{column}' has non-binary value '{value}' at row {row}.",
            column=column,
            row=row,
        )
    return text.map(_BINARY).to_numpy(dtype=np.int64)
