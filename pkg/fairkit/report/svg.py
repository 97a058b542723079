from html import escape
from typing import List, Tuple

from fairkit import settings
from fairkit.core.models import ComparisonTable

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="%(width)d" height="%(height)d" viewBox="0 0 %(width)d %(height)d">
<rect x="0" y="0" width="%(width)d" height="%(height)d" style="fill:#ffffff"/>
"""

POSTAMBLE = """\
</svg>
"""

PARETO_COLOR = "#d62728"
POINT_COLOR = "#1f77b4"
AXIS_COLOR = "#000000"
TEXT_COLOR = "#333333"


def _num(value: float) -> str:
    # Shortest representation of a value rounded for display.
    return repr(round(float(value), 2)) if abs(value) >= 1 else repr(round(float(value), 6))


def _coord(value: float) -> str:
    return repr(round(float(value), 2))


class SVG:
    """Minimal SVG document built from drawing commands, in pixels."""

    def __init__(self, width: int = settings.SVG_WIDTH, height: int = settings.SVG_HEIGHT):
        self.width = width
        self.height = height
        self.commands: List[str] = []

    def circle(self, x: float, y: float, radius: float, fill: str) -> None:
        self.commands.append(
            f'<circle cx="{_coord(x)}" cy="{_coord(y)}" r="{_coord(radius)}" '
            f'style="fill:{fill};stroke:#000000;stroke-width:1"/>'
        )

    def line(self, x1: float, y1: float, x2: float, y2: float, color: str = AXIS_COLOR) -> None:
        self.commands.append(
            f'<line x1="{_coord(x1)}" y1="{_coord(y1)}" x2="{_coord(x2)}" y2="{_coord(y2)}" '
            f'style="stroke:{color};stroke-width:1"/>'
        )

    def polyline(self, points: List[Tuple[float, float]], color: str) -> None:
        coords = " ".join(f"{_coord(x)},{_coord(y)}" for x, y in points)
        self.commands.append(
            f'<polyline points="{coords}" style="fill:none;stroke:{color};stroke-width:1;stroke-dasharray:4,3"/>'
        )

    def rect(self, x: float, y: float, width: float, height: float, fill: str) -> None:
        self.commands.append(
            f'<rect x="{_coord(x)}" y="{_coord(y)}" width="{_coord(width)}" height="{_coord(height)}" '
            f'style="fill:{fill}"/>'
        )

    def text(self, x: float, y: float, text: str, anchor: str = "start", rotate: bool = False) -> None:
        transform = f' transform="rotate(-90 {_coord(x)} {_coord(y)})"' if rotate else ""
        self.commands.append(
            f'<text x="{_coord(x)}" y="{_coord(y)}" fill="{TEXT_COLOR}" font-size="12" '
            f'font-family="sans-serif" text-anchor="{anchor}"{transform}>{escape(text)}</text>'
        )

    def render(self) -> str:
        body = "".join(command + "\n" for command in self.commands)
        return PREAMBLE % {"width": self.width, "height": self.height} + body + POSTAMBLE


def _axis_range(values: List[float]) -> Tuple[float, float]:
    low, high = min(values), max(values)
    if low == high:
        pad = 0.05 if low == 0 else abs(low) * 0.05
        return low - pad, high + pad
    pad = (high - low) * 0.05
    return low - pad, high + pad


def comparison_scatter(table: ComparisonTable) -> str:
    """Scatter plot of a comparison: performance on x, disparity on y.

    Each model is one labelled circle; Pareto points are drawn in another
    color and joined by a dashed line. Layout depends only on the table, so
    equal tables render to identical documents.
    """
    svg = SVG()
    margin = settings.SVG_MARGIN
    left, right = margin, svg.width - margin
    top, bottom = margin, svg.height - margin
    x_low, x_high = _axis_range([r.performance for r in table.rows])
    y_low, y_high = _axis_range([r.fairness for r in table.rows])

    def to_x(v: float) -> float:
        return left + (v - x_low) / (x_high - x_low) * (right - left)

    def to_y(v: float) -> float:
        return bottom - (v - y_low) / (y_high - y_low) * (bottom - top)

    svg.line(left, bottom, right, bottom)
    svg.line(left, bottom, left, top)
    for k in range(settings.SVG_TICKS + 1):
        fx = x_low + (x_high - x_low) * k / settings.SVG_TICKS
        fy = y_low + (y_high - y_low) * k / settings.SVG_TICKS
        svg.line(to_x(fx), bottom, to_x(fx), bottom + 5)
        svg.text(to_x(fx), bottom + 20, _num(fx), anchor="middle")
        svg.line(left - 5, to_y(fy), left, to_y(fy))
        svg.text(left - 8, to_y(fy) + 4, _num(fy), anchor="end")
    svg.text((left + right) / 2, svg.height - margin / 3, table.axes.performance_metric, anchor="middle")
    svg.text(margin / 3, (top + bottom) / 2, table.axes.fairness_metric, anchor="middle", rotate=True)

    front = sorted((r.performance, r.fairness) for r in table.rows if r.pareto)
    if len(front) > 1:
        svg.polyline([(to_x(p), to_y(f)) for p, f in front], PARETO_COLOR)
    for row in table.rows:
        x, y = to_x(row.performance), to_y(row.fairness)
        svg.circle(x, y, 5, PARETO_COLOR if row.pareto else POINT_COLOR)
        svg.text(x + 8, y - 8, row.model_name)

    svg.rect(right - 150, top - 50, 10, 10, PARETO_COLOR)
    svg.text(right - 135, top - 41, "Pareto")
    svg.rect(right - 150, top - 32, 10, 10, POINT_COLOR)
    svg.text(right - 135, top - 23, "dominated")
    return svg.render()
