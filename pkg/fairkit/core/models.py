import math
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from fairkit import settings

Role = Literal["feature", "y_true", "y_pred", "score", "sensitive", "sample_weight"]
ROLES: Tuple[str, ...] = ("feature", "y_true", "y_pred", "score", "sensitive", "sample_weight")

# Ordered tuple of categorical values, one per sensitive column.
GroupKey = Tuple[str, ...]

AggregationMethod = Literal["between_groups", "to_overall"]
UndefinedPolicy = Literal["raise", "skip"]



class ValidationIssue(BaseModel):
    """A single finding of ``validate_dataset``."""

    code: str = Field(..., description="Stable snake_case identifier of the rule.")
    message: str = Field(..., description="Human readable description.")
    column: Optional[str] = Field(None, description="Offending column, if any.")


class ValidationReport(BaseModel):
    """Errors and warnings found in a dataset. Errors are data, not faults."""

    errors: List[ValidationIssue] = Field(default_factory=list)
    warnings: List[ValidationIssue] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


class SyntheticConfig(BaseModel):
    """
    Pydantic model for the synthetic dataset generator configuration.
    """

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "n_rows": 1000,
                "group_weights": {"a": 0.6, "b": 0.4},
                "base_rates": {"a": 0.7, "b": 0.3},
                "score_noise": 0.15,
                "seed": 0,
            }
        },
    )

    n_rows: int = Field(..., ge=1, description="Number of rows to generate.")
    group_weights: Dict[str, float] = Field(
        ..., description="Probability of each sensitive group; must sum to 1."
    )
    base_rates: Dict[str, float] = Field(
        ..., description="P(y_true = 1 | group) for every group."
    )
    score_noise: float = Field(
        0.1, ge=0.0, description="Standard deviation of the Gaussian score noise."
    )
    seed: int = Field(0, description="Seed of the random generator.")
    n_features: int = Field(
        0, ge=0, description="Number of extra Gaussian feature columns x0..x{k-1}."
    )

    @field_validator("group_weights")
    @classmethod
    def _check_weights(cls, v: Dict[str, float]) -> Dict[str, float]:
        if not v:
            raise ValueError("group_weights must name at least one group")
        if any(not math.isfinite(w) or w < 0 for w in v.values()):
            raise ValueError("group_weights must be finite and non-negative")
        total = math.fsum(v.values())
        if abs(total - 1.0) > settings.WEIGHT_TOLERANCE:
            raise ValueError(f"group_weights must sum to 1, got {total!r}")
        return v

    @field_validator("base_rates")
    @classmethod
    def _check_rates(cls, v: Dict[str, float]) -> Dict[str, float]:
        if any(not (0.0 <= r <= 1.0) for r in v.values()):
            raise ValueError("base_rates must lie in [0, 1]")
        return v

    @model_validator(mode="after")
    def _check_groups(self) -> "SyntheticConfig":
        if set(self.group_weights) != set(self.base_rates):
            raise ValueError("group_weights and base_rates must name the same groups")
        return self


class GroupResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    group: List[str]
    values: Dict[str, Optional[float]]
    n: int


class MetricFrameResult(BaseModel):
    """
    Disaggregated evaluation: overall and per-group values of one or more
    metrics. ``None`` marks an undefined value (zero denominator).
    """

    model_config = ConfigDict(frozen=True)

    metrics: List[str]
    overall: Dict[str, Optional[float]]
    by_group: List[GroupResult]
    flags: List[str] = Field(default_factory=list)
    sensitive_names: List[str] = Field(default_factory=list)

    def group_values(self, metric: str) -> Dict[GroupKey, Optional[float]]:
        return {tuple(g.group): g.values[metric] for g in self.by_group}

    @property
    def group_sizes(self) -> Dict[GroupKey, int]:
        return {tuple(g.group): g.n for g in self.by_group}


class PrimitiveRule(BaseModel):
    """Deterministic or randomized decision rule applied to a single score."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["threshold", "constant", "coin"]
    param: float

    @model_validator(mode="after")
    def _check_param(self) -> "PrimitiveRule":
        if self.kind == "threshold" and not math.isfinite(self.param):
            raise ValueError("threshold rules need a finite threshold")
        if self.kind == "constant" and self.param not in (0.0, 1.0):
            raise ValueError("constant rules predict 0 or 1")
        if self.kind == "coin" and not (0.0 <= self.param <= 1.0):
            raise ValueError("coin probability must lie in [0, 1]")
        return self


class MixtureComponent(BaseModel):
    model_config = ConfigDict(frozen=True)

    w: float = Field(..., ge=0.0, le=1.0)
    rule: PrimitiveRule


class GroupPolicy(BaseModel):
    model_config = ConfigDict(frozen=True)

    group: List[str]
    mixture: List[MixtureComponent]
    operating_point: Dict[str, Optional[float]] = Field(default_factory=dict)

    @field_validator("mixture")
    @classmethod
    def _check_mixture(cls, v: List[MixtureComponent]) -> List[MixtureComponent]:
        if not 1 <= len(v) <= 3:
            raise ValueError("a group mixture has between 1 and 3 components")
        total = math.fsum(c.w for c in v)
        if abs(total - 1.0) > settings.WEIGHT_TOLERANCE:
            raise ValueError(f"mixture weights must sum to 1, got {total!r}")
        return v


class ThresholdPolicy(BaseModel):
    """Per-group randomized thresholding fitted by the post-processor."""

    model_config = ConfigDict(frozen=True)

    constraint: str
    objective: str
    score_column: Optional[str] = None
    sensitive_columns: List[str] = Field(default_factory=list)
    objective_value: Optional[float] = None
    groups: List[GroupPolicy]

    def group_map(self) -> Dict[GroupKey, GroupPolicy]:
        return {tuple(g.group): g for g in self.groups}


class ModelSpec(BaseModel):
    """Serializable description of a trained base classifier."""

    model_config = ConfigDict(frozen=True)

    kind: str
    params: Dict[str, Any]


class RandomizedComponent(BaseModel):
    model_config = ConfigDict(frozen=True)

    w: float = Field(..., ge=0.0, le=1.0)
    model: ModelSpec


class SolverDiagnostics(BaseModel):
    model_config = ConfigDict(frozen=True)

    iterations: int
    best_iteration: int
    final_gap: float
    best_lambda: List[float]
    converged: bool
    flags: List[str] = Field(default_factory=list)


class RandomizedClassifierSpec(BaseModel):
    """JSON form of the mixture returned by the reductions solver."""

    model_config = ConfigDict(frozen=True)

    features: List[str] = Field(default_factory=list)
    constraint: Optional[str] = None
    eps: Optional[float] = None
    components: List[RandomizedComponent]
    diagnostics: Optional[SolverDiagnostics] = None


class CorrelationRemoverModel(BaseModel):
    """Fitted linear decorrelation of non-sensitive columns."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., ge=0.0, le=1.0)
    sensitive_means: List[float]
    coefficients: List[List[float]]
    sensitive_cols: List[str]
    passthrough_cols: List[str]
    encoded_cols: List[str] = Field(default_factory=list)
    categories: Dict[str, List[str]] = Field(default_factory=dict)


class ComparisonRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    model_name: str
    performance: float
    fairness: float
    pareto: bool


class ComparisonAxes(BaseModel):
    model_config = ConfigDict(frozen=True)

    performance_metric: str
    fairness_metric: str


class ComparisonTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: List[ComparisonRow]
    axes: ComparisonAxes


class ReportMetadata(BaseModel):
    model_config = ConfigDict(frozen=True)

    tool_version: str
    input_digest: Optional[str] = None
    timestamp: Optional[str] = None


class Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["assessment", "comparison"]
    metadata: ReportMetadata
    payload: Union[MetricFrameResult, ComparisonTable]

    @model_validator(mode="after")
    def _check_kind(self) -> "Report":
        expected = MetricFrameResult if self.kind == "assessment" else ComparisonTable
        if not isinstance(self.payload, expected):
            raise ValueError(f"a {self.kind} report needs a {expected.__name__} payload")
        return self
