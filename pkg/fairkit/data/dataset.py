from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from fairkit.core.exceptions import ConfigError, SchemaError, ShapeError
from fairkit.core.models import ROLES, GroupKey


def group_labels(sensitive) -> List[GroupKey]:
    """Turns sensitive values into one GroupKey per row.

    Several sensitive columns combine by cross-product, so each distinct
    combination of values is its own (intersectional) group. Values are
    stringified so keys order lexicographically.

    Args:
        sensitive: A 1-D array-like or Series (one column), a DataFrame or a
            2-D array-like (one column per sensitive feature), or a list of
            GroupKey tuples.

    Returns:
        List[GroupKey]: One key per row.

    Raises:
        ShapeError: If ``sensitive`` has no column or more than two dimensions.
    """
    if isinstance(sensitive, pd.DataFrame):
        columns = [sensitive[c].to_numpy(dtype=object) for c in sensitive.columns]
    elif isinstance(sensitive, pd.Series):
        columns = [sensitive.to_numpy(dtype=object)]
    else:
        values = list(sensitive)
        if values and isinstance(values[0], tuple):
            arr = np.empty((len(values), len(values[0])), dtype=object)
            arr[:] = values
        else:
            arr = np.asarray(values, dtype=object)
        if arr.ndim == 1:
            columns = [arr]
        elif arr.ndim == 2:
            columns = [arr[:, j] for j in range(arr.shape[1])]
        else:
            raise ShapeError("Sensitive features must be 1-D or 2-D.")
    if not columns:
        raise ShapeError("At least one sensitive column is required.")
    return [tuple(str(v) for v in parts) for parts in zip(*columns)]


def distinct_groups(labels: Iterable[GroupKey]) -> List[GroupKey]:
    """Distinct GroupKeys in lexicographic order."""
    return sorted(set(labels))


class Dataset:
    """Immutable columnar table whose columns carry a role.

    Roles are ``feature``, ``y_true``, ``y_pred``, ``score``, ``sensitive``
    and ``sample_weight``. Columns without an explicit role are features.
    The constructor checks structure only; value-level invariants are
    reported by ``validate_dataset``.
    """

    def __init__(self, frame: pd.DataFrame, roles: Optional[Mapping[str, str]] = None):
        roles = dict(roles or {})
        names = [str(c) for c in frame.columns]
        for name, role in roles.items():
            if role not in ROLES:
                raise ConfigError(f"Unknown role '{role}' for column '{name}'.")
            if name not in names:
                raise SchemaError(f"Column '{name}' is not in the table.", column=name)
        self._frame = frame.copy(deep=True).reset_index(drop=True)
        self._frame.columns = names
        self._roles: Dict[str, str] = {name: roles.get(name, "feature") for name in names}

    @property
    def n_rows(self) -> int:
        return len(self._frame)

    @property
    def column_names(self) -> List[str]:
        return list(self._frame.columns)

    @property
    def roles(self) -> Dict[str, str]:
        return dict(self._roles)

    @property
    def sensitive_names(self) -> List[str]:
        return self.columns_with_role("sensitive")

    def role_of(self, name: str) -> str:
        self._require(name)
        return self._roles[name]

    def columns_with_role(self, role: str) -> List[str]:
        return [name for name in self.column_names if self._roles[name] == role]

    def column(self, name: str) -> np.ndarray:
        """Returns a copy of a column as a numpy array."""
        self._require(name)
        return self._frame[name].to_numpy(copy=True)

    def frame(self, columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
        """Returns a copy of the underlying table, optionally restricted to ``columns``."""
        if columns is None:
            return self._frame.copy(deep=True)
        for name in columns:
            self._require(name)
        return self._frame[list(columns)].copy(deep=True)

    def single(self, role: str) -> str:
        """Name of the only column holding ``role``."""
        names = self.columns_with_role(role)
        if len(names) != 1:
            raise SchemaError(
                f"Expected exactly one '{role}' column, found {len(names)}: {names}."
            )
        return names[0]

    def group_labels(self, columns: Optional[Sequence[str]] = None) -> List[GroupKey]:
        columns = list(columns) if columns is not None else self.sensitive_names
        if not columns:
            raise SchemaError("No sensitive column to group by.")
        return group_labels(self.frame(columns))

    def groups(self, columns: Optional[Sequence[str]] = None) -> List[GroupKey]:
        return distinct_groups(self.group_labels(columns))

    def with_column(self, name: str, values, role: str = "feature") -> "Dataset":
        """Returns a new Dataset with ``name`` added or replaced."""
        values = np.asarray(values)
        if len(values) != self.n_rows:
            raise ShapeError(
                f"Column '{name}' has {len(values)} values, expected {self.n_rows}."
            )
        frame = self.frame()
        frame[name] = values
        roles = self.roles
        roles[name] = role
        return Dataset(frame, roles)

    def select(self, columns: Sequence[str]) -> "Dataset":
        roles = {name: self._roles[name] for name in columns}
        return Dataset(self.frame(columns), roles)

    def equals(self, other: "Dataset") -> bool:
        """Value equality: same columns, roles and cells (numeric kinds compared exactly)."""
        if self.column_names != other.column_names or self.roles != other.roles:
            return False
        for name in self.column_names:
            a, b = self.column(name), other.column(name)
            if a.dtype.kind in "biuf" and b.dtype.kind in "biuf":
                if a.dtype.kind != b.dtype.kind or not np.array_equal(a, b):
                    return False
            elif [str(v) for v in a] != [str(v) for v in b]:
                return False
        return True

    def _require(self, name: str) -> None:
        if name not in self._roles:
            raise SchemaError(f"Column '{name}' is not in the dataset.", column=name)

    def __len__(self) -> int:
        return self.n_rows

    def __repr__(self) -> str:
        return f"Dataset(n_rows={self.n_rows}, roles={self._roles})"
