import io
import re
from typing import BinaryIO, Mapping, Union

import pandas as pd

from fairkit.core.exceptions import ConfigError, ParseError, SchemaError
from fairkit.core.models import ROLES
from fairkit.data.dataset import Dataset
from fairkit.utils.logging import logger
from fairkit.utils.parsers import (
    check_no_missing,
    is_real_column,
    parse_binary_column,
    parse_real_column,
)

Source = Union[bytes, BinaryIO]


def _read_cells(raw: bytes) -> pd.DataFrame:
    """Reads every cell as text, header row included, reporting ragged rows."""
    try:
        return pd.read_csv(
            io.BytesIO(raw),
            header=None,
            dtype=object,
            keep_default_na=False,
            na_filter=False,
            encoding="utf-8",
            sep=",",
            quotechar='"',
            engine="python",
        )
    except pd.errors.EmptyDataError:
        raise ParseError("CSV input is empty; a header row is required.")
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        row = int(match.group(1)) - 1 if match else None
        raise ParseError(f"Ragged CSV row {row}: {e}", row=row)
    except UnicodeDecodeError as e:
        raise ParseError(f"CSV input is not valid UTF-8: {e}")


def load_table(
    source: Source, role_map: Mapping[str, str], keep_unmapped: bool = False
) -> Dataset:
    """Loads a CSV table and assigns column roles.

    ``y_true``/``y_pred`` columns must hold 0/1 labels, ``score`` and
    ``sample_weight`` columns decimal-point numbers. Feature columns are
    numeric when every cell parses as a number and categorical (kept as
    text) otherwise; sensitive columns are always categorical. Missing
    values are rejected, never imputed.

    Args:
        source (Source): CSV bytes or a binary stream (UTF-8, comma
            delimiter, ``"``-quoting).
        role_map (Mapping[str, str]): Column name to role.
        keep_unmapped (bool): If True, header columns absent from
            ``role_map`` are kept as text feature columns; otherwise they
            are dropped.

    Returns:
        Dataset: The parsed table.

    Raises:
        ParseError: If rows are ragged or the text is not UTF-8 CSV.
        SchemaError: If a mapped column is missing or the header is invalid.
        DataValueError: If a label is not binary or a number is malformed.
        MissingValueError: If a cell is empty.
    """
    raw = source if isinstance(source, bytes) else source.read()
    for name, role in role_map.items():
        if role not in ROLES:
            raise ConfigError(f"Unknown role '{role}' for column '{name}'.")

    cells = _read_cells(raw)
    header = list(cells.iloc[0])
    if any(not name for name in header):
        raise SchemaError("CSV header has an empty column name.")
    duplicates = sorted({name for name in header if header.count(name) > 1})
    if duplicates:
        raise SchemaError(f"CSV header repeats column names: {duplicates}.", column=duplicates[0])

    data = cells.iloc[1:].reset_index(drop=True)
    data.columns = header
    short = data.isna().any(axis=1)
    if short.any():
        row = int(short.to_numpy().nonzero()[0][0]) + 1
        raise ParseError(f"Ragged CSV row {row}: fewer fields than the header.", row=row)

    missing = [name for name in role_map if name not in header]
    if missing:
        raise SchemaError(f"Column '{missing[0]}' is not in the CSV header.", column=missing[0])

    columns = {}
    roles = {}
    for name in header:
        role = role_map.get(name)
        series = data[name]
        if role is None:
            if not keep_unmapped:
                continue
            # Kept verbatim so echoing the table does not reformat its cells.
            check_no_missing(series, name)
            columns[name] = series.to_numpy(dtype=object)
            roles[name] = "feature"
            continue
        if role in ("y_true", "y_pred"):
            columns[name] = parse_binary_column(series, name)
        elif role in ("score", "sample_weight"):
            columns[name] = parse_real_column(series, name)
        elif role == "feature" and len(series) and is_real_column(series):
            columns[name] = parse_real_column(series, name)
        else:
            check_no_missing(series, name)
            columns[name] = series.to_numpy(dtype=object)
        roles[name] = role

    dataset = Dataset(pd.DataFrame(columns, columns=list(columns)), roles)
    logger.debug(f"Loaded table with {dataset.n_rows} rows and columns {list(columns)}.")
    return dataset


def write_csv(d: Dataset) -> bytes:
    """Writes a Dataset as CSV bytes; ``load_table`` with ``d.roles`` reads it back."""
    text = d.frame().to_csv(index=False, lineterminator="\n")
    return text.encode("utf-8")
