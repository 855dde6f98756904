"""Text and SVG rendering of problems, in the circled-hold style of the
usual board diagrams."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .board import COLS, COLUMN_LETTERS, GridCoord, HoldRole, Problem, ROWS
from .errors import DataError

_GLYPHS = {HoldRole.START: "S", HoldRole.MID: "M", HoldRole.FINISH: "F"}
_GLYPH_ROLES = {v: k for k, v in _GLYPHS.items()}


@dataclass(frozen=True)
class RenderStyle:
    """SVG styling. Role colors follow board convention: start green,
    intermediate blue, finish red."""

    cell_size: int = 40
    start_color: str = "#2ea043"
    mid_color: str = "#1f6feb"
    finish_color: str = "#f85149"
    grid_labels: bool = True

    def __post_init__(self):
        if self.cell_size <= 0:
            raise DataError(f"cell_size must be > 0, got {self.cell_size}")

    def color_for(self, role: HoldRole) -> str:
        return {
            HoldRole.START: self.start_color,
            HoldRole.MID: self.mid_color,
            HoldRole.FINISH: self.finish_color,
        }[role]


def render_ascii(problem: Problem) -> str:
    """Plain-text board: a column-header line, then 18 rows top-first.

    Holds show as S/M/F by role, empty cells as '.'. Row numbers sit on the
    left. The output always has exactly 18 row lines.
    """
    glyphs = {c: _GLYPHS[r] for c, r in problem.holds}
    lines = ["   " + " ".join(COLUMN_LETTERS)]
    for row in range(ROWS - 1, -1, -1):
        cells = [glyphs.get(GridCoord(col=col, row=row), ".") for col in range(COLS)]
        lines.append(f"{row + 1:>2} " + " ".join(cells))
    return "\n".join(lines)


def parse_ascii(text: str) -> set[tuple[GridCoord, HoldRole]]:
    """Inverse of :func:`render_ascii` (round-trip helper for tests)."""
    holds: set[tuple[GridCoord, HoldRole]] = set()
    for line in text.splitlines():
        body = line[3:]
        label = line[:3].strip()
        if not label.isdigit():
            continue
        row = int(label) - 1
        cells = body.split(" ")
        for col, glyph in enumerate(cells):
            if glyph in _GLYPH_ROLES:
                holds.add((GridCoord(col=col, row=row), _GLYPH_ROLES[glyph]))
    return holds


def render_svg(problem: Problem, style: RenderStyle | None = None) -> str:
    """SVG board diagram: one circle per hold, colored by role.

    Uses only rect, circle, and text elements. The grid is drawn as cell
    outlines so circle elements correspond exactly to holds.
    """
    style = style or RenderStyle()
    cs = style.cell_size
    margin = cs if style.grid_labels else cs // 4
    width = margin + COLS * cs + cs // 4
    height = margin // 2 + ROWS * cs + (margin if style.grid_labels else cs // 4)

    def cx(col: int) -> float:
        return margin + (col + 0.5) * cs

    def cy(row: int) -> float:
        return margin // 2 + (ROWS - 1 - row + 0.5) * cs

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="{margin}" y="{margin // 2}" width="{COLS * cs}" height="{ROWS * cs}" '
        f'fill="#f6f8fa" stroke="#57606a"/>',
    ]
    for row in range(ROWS):
        for col in range(COLS):
            parts.append(
                f'<rect x="{margin + col * cs}" y="{margin // 2 + (ROWS - 1 - row) * cs}" '
                f'width="{cs}" height="{cs}" fill="none" stroke="#d0d7de" stroke-width="1"/>'
            )
    if style.grid_labels:
        for col in range(COLS):
            parts.append(
                f'<text x="{cx(col):g}" y="{margin // 2 + ROWS * cs + cs * 0.6:g}" '
                f'text-anchor="middle" font-size="{cs * 0.4:g}" '
                f'font-family="sans-serif">{COLUMN_LETTERS[col]}</text>'
            )
        for row in range(ROWS):
            parts.append(
                f'<text x="{margin - cs * 0.25:g}" y="{cy(row) + cs * 0.15:g}" '
                f'text-anchor="end" font-size="{cs * 0.4:g}" '
                f'font-family="sans-serif">{row + 1}</text>'
            )
    for coord, role in problem.holds:
        parts.append(
            f'<circle cx="{cx(coord.col):g}" cy="{cy(coord.row):g}" r="{cs * 0.38:g}" '
            f'fill="none" stroke="{escape(style.color_for(role))}" '
            f'stroke-width="{max(2, cs // 12)}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
