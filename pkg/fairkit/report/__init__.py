from .comparison import compare_models, pareto_flags
from .render import (
    REPORT_FORMATS,
    assessment_frame,
    build_report,
    comparison_frame,
    input_digest,
    render_report,
)
from .svg import SVG, comparison_scatter

__all__ = [
    "REPORT_FORMATS",
    "SVG",
    "assessment_frame",
    "build_report",
    "compare_models",
    "comparison_frame",
    "comparison_scatter",
    "input_digest",
    "pareto_flags",
    "render_report",
]
