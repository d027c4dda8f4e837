"""Hexagonal tile maps of New Zealand District Health Boards and Regions."""

from .apportion import CategoryCounts, sainte_lague, tri_alloc
from .hexgeom import AxialCoord, HexPatch, Point, axial_to_center, hex_vertices, triangle_vertices
from .layouts import Layout, Unit, builtin_layout, resolve_name, validate_layout
from .render import FacetSpec, Scene, render_facets, render_legend, render_map, render_tri_map, to_svg
from .styling import MISSING, Breaks, Palette, StyleEntry, bin_value, label_colour, radius_sqrt

__version__ = "0.1.0"
