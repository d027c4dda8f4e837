"""Pointy-top hexagon geometry on an axial grid.

Screen coordinates are used throughout: x grows to the right and y grows
downward, as in SVG. A hexagon's vertices are numbered from the topmost
point and proceed clockwise as seen on screen; triangle ``k`` of the
centre fan spans vertices ``k`` and ``k + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

SQRT3 = math.sqrt(3.0)

# axial offsets of the six neighbours, clockwise from east
NEIGHBOUR_OFFSETS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


@dataclass(frozen=True, order=True)
class AxialCoord:
    q: int
    r: int

    def __post_init__(self):
        for name in ("q", "r"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"axial {name} must be an integer, got {value!r}")

    def neighbours(self) -> list[AxialCoord]:
        return [AxialCoord(self.q + dq, self.r + dr) for dq, dr in NEIGHBOUR_OFFSETS]


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class HexPatch:
    center: Point
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.center[0]) and math.isfinite(self.center[1])):
            raise ValueError(f"hex centre must be finite, got {self.center!r}")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"hex radius must be positive, got {self.radius!r}")


def axial_to_center(c: AxialCoord, R: float) -> Point:
    """Centre of cell ``c`` for hexes of circumradius ``R``.

    Rows step down by 1.5 R and each row is shifted half a cell to the right,
    so horizontally adjacent cells are R*sqrt(3) apart and share an edge.
    """
    if not R > 0:
        raise ValueError(f"cell radius must be positive, got {R!r}")
    return Point(R * SQRT3 * (c.q + c.r / 2.0), R * 1.5 * c.r)


# unit offsets of the vertices: top, then clockwise on screen
_HALF_WIDTH = SQRT3 / 2.0
_UNIT_VERTICES = (
    (0.0, -1.0),
    (_HALF_WIDTH, -0.5),
    (_HALF_WIDTH, 0.5),
    (0.0, 1.0),
    (-_HALF_WIDTH, 0.5),
    (-_HALF_WIDTH, -0.5),
)


def hex_vertices(h: HexPatch) -> list[Point]:
    cx, cy = h.center
    return [Point(cx + h.radius * dx, cy + h.radius * dy) for dx, dy in _UNIT_VERTICES]


def triangle_vertices(h: HexPatch, k: int) -> list[Point]:
    """Triangle ``k`` of the six-way fan: centre, vertex k, vertex k+1."""
    if isinstance(k, bool) or not isinstance(k, int) or not 0 <= k <= 5:
        raise ValueError(f"triangle index must be an integer in 0..5, got {k!r}")
    vertices = hex_vertices(h)
    return [Point(*h.center), vertices[k], vertices[(k + 1) % 6]]

