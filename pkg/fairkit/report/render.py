import hashlib
from typing import Optional, Union

import pandas as pd

from fairkit.core.exceptions import FormatError
from fairkit.core.models import (
    ComparisonTable,
    MetricFrameResult,
    Report,
    ReportMetadata,
)
from fairkit.report.svg import comparison_scatter
from fairkit.utils.output import frame_to_csv, model_to_json

REPORT_FORMATS = ("json", "csv", "svg")


def input_digest(raw: bytes) -> str:
    """``sha256:<hex>`` digest of the raw input bytes."""
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def build_report(
    payload: Union[MetricFrameResult, ComparisonTable],
    input_bytes: Optional[bytes] = None,
    timestamp: Optional[str] = None,
) -> Report:
    """Wraps an assessment or comparison in a report with its metadata.

    The kind is taken from the payload type. ``timestamp`` stays ``None``
    unless given, so reports of equal inputs are byte-identical.
    """
    from fairkit import __version__

    kind = "assessment" if isinstance(payload, MetricFrameResult) else "comparison"
    metadata = ReportMetadata(
        tool_version=__version__,
        input_digest=input_digest(input_bytes) if input_bytes is not None else None,
        timestamp=timestamp,
    )
    return Report(kind=kind, metadata=metadata, payload=payload)


def assessment_frame(result: MetricFrameResult) -> pd.DataFrame:
    """Flattens an assessment: per metric, one overall row then one row per group.

    Undefined values are left empty.
    """
    names = result.sensitive_names or [f"sensitive_{j}" for j in range(len(result.by_group[0].group))]
    total = sum(g.n for g in result.by_group)
    rows = []
    for metric in result.metrics:
        rows.append(
            {
                "scope": "overall",
                **{name: "" for name in names},
                "metric": metric,
                "value": result.overall[metric],
                "n": total,
            }
        )
        for group in result.by_group:
            rows.append(
                {
                    "scope": "group",
                    **dict(zip(names, group.group)),
                    "metric": metric,
                    "value": group.values[metric],
                    "n": group.n,
                }
            )
    return pd.DataFrame(rows, columns=["scope", *names, "metric", "value", "n"], dtype=object)


def comparison_frame(table: ComparisonTable) -> pd.DataFrame:
    return pd.DataFrame(
        [row.model_dump() for row in table.rows],
        columns=["model_name", "performance", "fairness", "pareto"],
        dtype=object,
    )


def render_report(report: Report, format: str = "json") -> bytes:
    """Renders a report as a JSON, CSV or SVG document.

    Args:
        report (Report): Assessment or comparison report.
        format (str): ``json``, ``csv`` or ``svg`` (comparisons only).

    Returns:
        bytes: UTF-8 document.

    Raises:
        FormatError: Unknown format, or SVG requested for an assessment.
    """
    fmt = format.lower()
    if fmt not in REPORT_FORMATS:
        raise FormatError(f"Unsupported format '{format}'. Options: {', '.join(REPORT_FORMATS)}.")
    if fmt == "json":
        return model_to_json(report).encode("utf-8")
    if fmt == "csv":
        if isinstance(report.payload, MetricFrameResult):
            return frame_to_csv(assessment_frame(report.payload)).encode("utf-8")
        return frame_to_csv(comparison_frame(report.payload)).encode("utf-8")
    if report.kind != "comparison":
        raise FormatError("SVG output is only available for comparison reports.")
    return comparison_scatter(report.payload).encode("utf-8")
