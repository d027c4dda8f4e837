"""Scene construction and deterministic SVG serialisation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union
from xml.sax.saxutils import escape, quoteattr

from .errors import DataError
from .hexgeom import HexPatch, Point, axial_to_center, hex_vertices, triangle_vertices
from .layouts import Layout
from .styling import MISSING, StyleEntry, label_colour

CELL_RADIUS = 20.0
STROKE = "#333333"
STROKE_FRACTION = 0.03
ABBREV_FONT = 0.5
FULL_FONT = 0.35
FONT_FAMILY = "sans-serif"
LABEL_MODES = ("full", "abbrev", "none")


@dataclass(frozen=True)
class Polygon:
    points: tuple[Point, ...]
    fill: Optional[str]  # None paints no fill
    stroke: str = STROKE
    stroke_width: float = 0.0
    role: str = ""  # emitted as the SVG class: "hex", "tri" or "swatch"


@dataclass(frozen=True)
class Text:
    anchor: Point
    text: str
    colour: str = "black"
    font_size: float = 10.0
    align: str = "middle"


@dataclass(frozen=True)
class Group:
    offset: Point
    children: tuple = ()


Element = Union[Polygon, Text, Group]


@dataclass(frozen=True)
class Scene:
    width: float
    height: float
    elements: tuple = field(default=())

    def walk(self):
        """Every leaf element, depth first, with its absolute offset."""
        out = []

        def visit(offset, elements):
            for el in elements:
                if isinstance(el, Group):
                    visit(Point(offset[0] + el.offset[0], offset[1] + el.offset[1]), el.children)
                else:
                    out.append((offset, el))

        visit(Point(0.0, 0.0), self.elements)
        return out

    def polygons(self, role: Optional[str] = None) -> list[Polygon]:
        return [el for _, el in self.walk() if isinstance(el, Polygon) and (role is None or el.role == role)]

    def texts(self) -> list[Text]:
        return [el for _, el in self.walk() if isinstance(el, Text)]


@dataclass(frozen=True)
class FacetSpec:
    keys: tuple[str, ...]
    columns: int = 2
    shared_legend: bool = True
    title_height: float = 24.0
    title_size: float = 14.0

    def __post_init__(self):
        object.__setattr__(self, "keys", tuple(self.keys))
        if len(set(self.keys)) != len(self.keys):
            raise ValueError(f"facet keys must be unique: {list(self.keys)}")
        if isinstance(self.columns, bool) or not isinstance(self.columns, int) or self.columns < 1:
            raise ValueError(f"columns must be a positive integer, got {self.columns!r}")


def _label_text(unit, mode: str, entry: Optional[StyleEntry]) -> Optional[tuple[str, float]]:
    if mode not in LABEL_MODES:
        raise ValueError(f"label mode must be one of {LABEL_MODES}, got {mode!r}")
    if mode == "none":
        return None
    if entry is not None and entry.label is not None:
        return entry.label, ABBREV_FONT
    if mode == "full":
        return unit.name, FULL_FONT
    return unit.abbrev, ABBREV_FONT


def _frame(layout: Layout, R: float) -> tuple[Point, float, float]:
    """Offset that puts the layout one radius inside the canvas, and the canvas size."""
    centers = [axial_to_center(u.cell, R) for u in layout.units]
    half_w = R * math.sqrt(3.0) / 2.0
    min_x = min(c.x for c in centers) - half_w
    max_x = max(c.x for c in centers) + half_w
    min_y = min(c.y for c in centers) - R
    max_y = max(c.y for c in centers) + R
    offset = Point(R - min_x, R - min_y)
    return offset, (max_x - min_x) + 2 * R, (max_y - min_y) + 2 * R


def _check_ids(layout: Layout, ids) -> None:
    known = set(layout.ids)
    unknown = sorted(set(ids) - known)
    if unknown:
        raise DataError(f"not in the {layout.kind} layout: {', '.join(unknown)}")


def render_map(
    layout: Layout,
    style: Mapping[str, StyleEntry],
    label_mode: str = "abbrev",
    R: float = CELL_RADIUS,
) -> Scene:
    """One hex per unit, scaled by its radius fraction and filled by its style.

    Units absent from ``style`` or with a MISSING fill are drawn as empty
    outlines at full size without a label. Units with radius 0 are left out.
    """
    _check_ids(layout, style)
    offset, width, height = _frame(layout, R)
    hexes, labels = [], []
    for unit in layout.units:
        entry = style.get(unit.id)
        center = axial_to_center(unit.cell, R)
        if entry is None or entry.fill is MISSING:
            patch = HexPatch(center, R)
            hexes.append(Polygon(tuple(hex_vertices(patch)), None, STROKE, STROKE_FRACTION * R, "hex"))
            continue
        if entry.radius <= 0:
            continue
        patch = HexPatch(center, R * entry.radius)
        hexes.append(Polygon(tuple(hex_vertices(patch)), entry.fill, STROKE, STROKE_FRACTION * R, "hex"))
        label = _label_text(unit, label_mode, entry)
        if label is not None:
            text, size = label
            labels.append(Text(center, text, entry.text_colour, size * R))
    body = Group(offset, tuple(hexes) + tuple(labels))
    return Scene(width, height, (body,))


def _dominant(colours: Sequence[str]) -> str:
    return max(colours, key=lambda c: (colours.count(c), -colours.index(c)))


def render_tri_map(
    layout: Layout,
    fills: Mapping[str, Sequence[str]],
    label_mode: str = "abbrev",
    R: float = CELL_RADIUS,
) -> Scene:
    """Six coloured triangles per unit; slot k paints triangle k.

    Units not in ``fills`` are drawn as empty outlines. Labels take the
    text colour that suits the most common triangle fill.
    """
    _check_ids(layout, fills)
    for unit_id, colours in fills.items():
        if len(colours) != 6:
            raise DataError(f"{unit_id}: expected 6 triangle colours, got {len(colours)}")
    offset, width, height = _frame(layout, R)
    shapes, labels = [], []
    stroke_width = STROKE_FRACTION * R
    for unit in layout.units:
        patch = HexPatch(axial_to_center(unit.cell, R), R)
        colours = fills.get(unit.id)
        if colours is None:
            shapes.append(Polygon(tuple(hex_vertices(patch)), None, STROKE, stroke_width, "hex"))
            continue
        for k, colour in enumerate(colours):
            shapes.append(Polygon(tuple(triangle_vertices(patch, k)), colour, STROKE, stroke_width, "tri"))
        label = _label_text(unit, label_mode, None)
        if label is not None:
            text, size = label
            labels.append(Text(patch.center, text, label_colour(_dominant(list(colours))), size * R))
    return Scene(width, height, (Group(offset, tuple(shapes) + tuple(labels)),))


def render_legend(
    entries: Sequence[tuple[str, str]],
    swatch: float = 14.0,
    font_size: float = 11.0,
) -> Scene:
    """A single row of colour swatches, each followed by its label.

    Spacing comes from the longest label's character count, so the layout
    never depends on font metrics.
    """
    margin = swatch
    longest = max((len(label) for label, _ in entries), default=0)
    pitch = swatch * 2.4 + font_size * 0.62 * longest
    elements = []
    for i, (label, colour) in enumerate(entries):
        x = margin + i * pitch
        y = margin
        corners = (Point(x, y), Point(x + swatch, y), Point(x + swatch, y + swatch), Point(x, y + swatch))
        elements.append(Polygon(corners, colour, STROKE, swatch * 0.05, "swatch"))
        elements.append(Text(Point(x + swatch * 1.4, y + swatch / 2), label, "black", font_size, "start"))
    width = 2 * margin + len(entries) * pitch
    return Scene(width, 3 * swatch, tuple(elements))


def with_legend(scene: Scene, legend: Optional[Scene]) -> Scene:
    """``scene`` with ``legend`` stacked underneath it."""
    if legend is None:
        return scene
    below = Group(Point(0.0, scene.height), legend.elements)
    return Scene(max(scene.width, legend.width), scene.height + legend.height, scene.elements + (below,))


def render_facets(
    panels: Sequence[tuple[str, Scene]],
    spec: FacetSpec,
    legend: Optional[Scene] = None,
) -> Scene:
    """Small multiples: titled panels filled row by row, legend below the grid."""
    if not panels:
        raise ValueError("at least one panel is required")
    width, height = panels[0][1].width, panels[0][1].height
    for label, scene in panels:
        if (scene.width, scene.height) != (width, height):
            raise ValueError(f"panel {label!r} has a different canvas size from the first panel")
    order = {key: i for i, key in enumerate(spec.keys)}
    if order:
        missing = [label for label, _ in panels if label not in order]
        if missing:
            raise ValueError(f"panels not listed in the facet keys: {missing}")
        panels = sorted(panels, key=lambda p: order[p[0]])

    cell_h = height + spec.title_height
    groups = []
    for i, (label, scene) in enumerate(panels):
        row, col = divmod(i, spec.columns)
        title = Text(Point(width / 2.0, spec.title_height * 0.7), label, "black", spec.title_size)
        body = Group(Point(0.0, spec.title_height), scene.elements)
        groups.append(Group(Point(col * width, row * cell_h), (title, body)))

    n_cols = min(spec.columns, len(panels))
    n_rows = -(-len(panels) // spec.columns)
    grid = Scene(n_cols * width, n_rows * cell_h, tuple(groups))
    return with_legend(grid, legend if spec.shared_legend else None)


def fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _emit(el: Element, depth: int, out: list[str]) -> None:
    pad = "  " * depth
    if isinstance(el, Group):
        out.append(f'{pad}<g transform="translate({fmt(el.offset[0])},{fmt(el.offset[1])})">')
        for child in el.children:
            _emit(child, depth + 1, out)
        out.append(f"{pad}</g>")
    elif isinstance(el, Polygon):
        pts = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in el.points)
        attrs = f' class="{el.role}"' if el.role else ""
        out.append(
            f'{pad}<polygon{attrs} points="{pts}" fill="{el.fill or "none"}"'
            f' stroke="{el.stroke}" stroke-width="{fmt(el.stroke_width)}"/>'
        )
    elif isinstance(el, Text):
        out.append(
            f'{pad}<text x="{fmt(el.anchor[0])}" y="{fmt(el.anchor[1])}" fill={quoteattr(el.colour)}'
            f' font-family="{FONT_FAMILY}" font-size="{fmt(el.font_size)}"'
            f' text-anchor="{el.align}" dominant-baseline="central">{escape(el.text)}</text>'
        )
    else:
        raise TypeError(f"cannot serialise {type(el).__name__}")


def to_svg(scene: Scene) -> bytes:
    w, h = fmt(scene.width), fmt(scene.height)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
    ]
    for el in scene.elements:
        _emit(el, 1, out)
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
