from typing import List, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from fairkit import settings
from fairkit.core.constraints import resolve_constraint
from fairkit.core.exceptions import MomentError, ShapeError
from fairkit.core.models import GroupKey
from fairkit.data.dataset import distinct_groups, group_labels
from fairkit.utils.logging import logger

# Conditioning label of each moment family; None conditions on every row.
_EVENTS = {
    "demographic_parity": (None,),
    "equalized_odds": (0, 1),
    "true_positive_rate_parity": (1,),
    "false_positive_rate_parity": (0,),
}


class MomentTerm(NamedTuple):
    """One signed term: ``sign * (E[h | event, group] - E[h | event]) <= eps``."""

    event: Optional[int]
    group: GroupKey
    sign: int

    @property
    def name(self) -> str:
        event = "all" if self.event is None else f"y={self.event}"
        return f"{event}|{'|'.join(self.group)}|{'+' if self.sign > 0 else '-'}"


class ConstraintSpec(BaseModel):
    """A fairness-constraint family plus its slack ``eps``."""

    model_config = ConfigDict(frozen=True)

    family: str
    eps: float = Field(settings.DEFAULT_EPS, ge=0.0)

    @field_validator("family")
    @classmethod
    def _canonical_family(cls, v: str) -> str:
        return resolve_constraint(v)

    def compile(self, y_true, sensitive, strict: bool = False) -> "CompiledConstraint":
        """Compiles the family on concrete labels and groups. See ``CompiledConstraint``."""
        return CompiledConstraint(self, y_true, sensitive, strict)


class CompiledConstraint:
    """Signed linear moment terms over a fixed set of rows.

    Row ``j`` of ``matrix`` is ``sign_j * (1[cell_j]/|cell_j| - 1[base_j]/|base_j|)``
    where ``base_j`` holds the rows matching the term's event and ``cell_j``
    those of ``base_j`` in the term's group, so ``matrix @ preds`` is the
    violation vector. Demographic parity terms come per group as (+, -);
    label-conditioned families go per label, then per group, then per sign.
    Terms with an empty cell are dropped and flagged, or raise in strict mode.
    """

    def __init__(self, spec: ConstraintSpec, y_true, sensitive, strict: bool = False):
        self.spec = spec
        labels = group_labels(sensitive)
        self.n = len(labels)
        events = _EVENTS[spec.family]
        y = None
        if events != (None,):
            if y_true is None:
                raise ShapeError(f"Constraint '{spec.family}' needs y_true.")
            y = np.asarray(y_true, dtype=np.float64).ravel()
            if len(y) != self.n:
                raise ShapeError(f"y_true has {len(y)} rows but sensitive has {self.n}.")

        self.groups: List[GroupKey] = distinct_groups(labels)
        membership = {g: np.array([key == g for key in labels], dtype=bool) for g in self.groups}
        self.terms: List[MomentTerm] = []
        self.flags: List[str] = []
        rows = []
        for event in events:
            base = np.ones(self.n, dtype=bool) if event is None else (y == event)
            for group in self.groups:
                cell = base & membership[group]
                if not cell.any():
                    label = "all rows" if event is None else f"y={event}"
                    message = f"Empty moment cell for group {group} and {label}."
                    if strict:
                        raise MomentError(message)
                    logger.warning(f"{message} Dropping its terms.")
                    self.flags.append(f"dropped_terms:{'|'.join(group)}:{label}")
                    continue
                diff = cell / cell.sum() - base / base.sum()
                for sign in (1, -1):
                    self.terms.append(MomentTerm(event, group, sign))
                    rows.append(sign * diff)
        self.matrix = np.array(rows, dtype=np.float64).reshape(len(rows), self.n)

    @property
    def family(self) -> str:
        return self.spec.family

    @property
    def eps(self) -> float:
        return self.spec.eps

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def gamma(self, preds) -> np.ndarray:
        """Violation of every term under (expected) predictions ``preds``."""
        p = np.asarray(preds, dtype=np.float64).ravel()
        if len(p) != self.n:
            raise ShapeError(f"Predictions have {len(p)} rows, expected {self.n}.")
        return self.matrix @ p

    def costs(self, lam) -> np.ndarray:
        """Per-row coefficient of ``h(x_i)`` in ``lam . gamma(h)``."""
        return np.asarray(lam, dtype=np.float64) @ self.matrix


def moment_violations(
    constraint: ConstraintSpec, y_true, preds, sensitive, strict: bool = False
) -> np.ndarray:
    """Violation vector ``gamma`` of a constraint family, one entry per compiled term.

    The constraint holds iff every entry is at most ``constraint.eps``.

    Raises:
        MomentError: In strict mode, if a conditioning cell is empty.
    """
    return constraint.compile(y_true, sensitive, strict).gamma(preds)
