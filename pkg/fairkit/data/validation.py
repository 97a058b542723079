from collections import Counter
from typing import List

import numpy as np
import pandas as pd

from fairkit import settings
from fairkit.core.models import ValidationIssue, ValidationReport
from fairkit.data.dataset import Dataset, group_labels


def _missing_mask(values: np.ndarray) -> np.ndarray:
    series = pd.Series(values, dtype=object)
    return (series.isna() | (series.astype(str).str.strip() == "")).to_numpy()


def _as_numbers(values: np.ndarray) -> np.ndarray:
    return pd.to_numeric(pd.Series(values, dtype=object), errors="coerce").to_numpy(
        dtype=np.float64
    )


def validate_dataset(d: Dataset, require_sensitive: bool = True) -> ValidationReport:
    """Checks every Dataset invariant and reports violations as data.

    Errors: empty or repeated column names, missing sensitive column (when
    ``require_sensitive``), missing cells, non-binary labels, non-finite
    scores and invalid sample weights. Warnings: groups with fewer than
    ``settings.SMALL_GROUP_WARNING`` rows and sensitive columns holding a
    single distinct value.

    Args:
        d (Dataset): The dataset to check.
        require_sensitive (bool): Whether a fairness operation will run on
            the dataset, which needs at least one sensitive column.

    Returns:
        ValidationReport: Empty ``errors`` exactly when ``d`` is valid.
    """
    errors: List[ValidationIssue] = []
    warnings: List[ValidationIssue] = []

    names = d.column_names
    for name in names:
        if not name.strip():
            errors.append(ValidationIssue(code="empty_column_name", message="A column name is empty."))
    for name, count in Counter(names).items():
        if count > 1:
            errors.append(
                ValidationIssue(
                    code="duplicate_column",
                    message=f"Column name '{name}' appears {count} times.",
                    column=name,
                )
            )
    if errors:
        # Column access is ambiguous until names are fixed.
        return ValidationReport(errors=errors, warnings=warnings)

    sensitive = d.sensitive_names
    if require_sensitive and not sensitive:
        errors.append(
            ValidationIssue(code="no_sensitive", message="No column holds the 'sensitive' role.")
        )

    for name in names:
        role = d.role_of(name)
        values = d.column(name)
        if role == "score":
            numbers = _as_numbers(values)
            bad = ~np.isfinite(numbers)
            if bad.any():
                row = int(np.flatnonzero(bad)[0]) + 1
                errors.append(
                    ValidationIssue(
                        code="non_finite_score",
                        message=f"Score column '{name}' has a non-finite value at row {row}.",
                        column=name,
                    )
                )
            continue

        missing = _missing_mask(values)
        if missing.any():
            row = int(np.flatnonzero(missing)[0]) + 1
            errors.append(
                ValidationIssue(
                    code="missing_value",
                    message=f"Column '{name}' has a missing value at row {row}.",
                    column=name,
                )
            )
            continue

        if role in ("y_true", "y_pred"):
            numbers = _as_numbers(values)
            bad = ~np.isin(numbers, (0.0, 1.0))
            if bad.any():
                row = int(np.flatnonzero(bad)[0]) + 1
                errors.append(
                    ValidationIssue(
                        code="non_binary",
                        message=f"Column '{name}' has non-binary value '{values[row - 1]}' at row {row}.",
                        column=name,
                    )
                )
        elif role == "sample_weight":
            numbers = _as_numbers(values)
            if not np.all(np.isfinite(numbers)) or np.any(numbers < 0):
                errors.append(
                    ValidationIssue(
                        code="invalid_weight",
                        message=f"Weight column '{name}' has negative or non-finite values.",
                        column=name,
                    )
                )
            elif d.n_rows and not np.any(numbers > 0):
                errors.append(
                    ValidationIssue(
                        code="invalid_weight",
                        message=f"Weight column '{name}' is all zero.",
                        column=name,
                    )
                )

    for name in sensitive:
        if d.n_rows and len(set(str(v) for v in d.column(name))) == 1:
            warnings.append(
                ValidationIssue(
                    code="single_group",
                    message=f"Sensitive column '{name}' has a single distinct value.",
                    column=name,
                )
            )

    if sensitive and not any(e.column in sensitive for e in errors):
        sizes = Counter(group_labels(d.frame(sensitive)))
        for group in sorted(sizes):
            if sizes[group] < settings.SMALL_GROUP_WARNING:
                warnings.append(
                    ValidationIssue(
                        code="small_group",
                        message=f"Group {group} has only {sizes[group]} rows.",
                    )
                )

    return ValidationReport(errors=errors, warnings=warnings)
