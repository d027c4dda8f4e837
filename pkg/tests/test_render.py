import math
import xml.etree.ElementTree as ET

import pytest

from nzhex.errors import DataError
from nzhex.hexgeom import HexPatch, axial_to_center, triangle_vertices
from nzhex.layouts import builtin_layout
from nzhex.render import (
    CELL_RADIUS,
    FacetSpec,
    Group,
    Polygon,
    Scene,
    Text,
    render_facets,
    render_legend,
    render_map,
    render_tri_map,
    to_svg,
    with_legend,
)
from nzhex.styling import MISSING, StyleEntry

SVG = "{http://www.w3.org/2000/svg}"
DHB = builtin_layout("dhb")
REGION = builtin_layout("region")


def parse(scene):
    return ET.fromstring(to_svg(scene))


def svg_polygons(root, role=None):
    polys = root.iter(f"{SVG}polygon")
    return [p for p in polys if role is None or p.get("class") == role]


def all_filled(layout, colour="#41b6c4"):
    return {u.id: StyleEntry(colour) for u in layout}


def hex_centre(poly):
    xs = [p.x for p in poly.points]
    ys = [p.y for p in poly.points]
    return ((max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2)


def test_render_map_full_dhb():
    scene = render_map(DHB, all_filled(DHB), "abbrev")
    assert len(scene.polygons("hex")) == 20
    assert len(scene.texts()) == 20
    assert {t.text for t in scene.texts()} == {u.abbrev for u in DHB}


def test_empty_stylesheet_draws_outlines_only():
    scene = render_map(DHB, {}, "abbrev")
    hexes = scene.polygons("hex")
    assert len(hexes) == 20 and all(p.fill is None for p in hexes)
    assert scene.texts() == []
    root = parse(scene)
    assert all(p.get("fill") == "none" for p in svg_polygons(root, "hex"))


def test_half_radius_unit():
    style = all_filled(DHB)
    style["lakes"] = StyleEntry("#41b6c4", radius=0.5)
    scene = render_map(DHB, style)
    centre = axial_to_center(DHB.unit("lakes").cell, CELL_RADIUS)
    small = [p for p in scene.polygons("hex") if math.dist(hex_centre(p), centre) < 1e-9]
    assert len(small) == 1
    for v in small[0].points:
        assert math.dist(v, centre) == pytest.approx(CELL_RADIUS / 2, abs=1e-9)


def test_zero_radius_omits_hex_and_label():
    style = all_filled(DHB)
    style["lakes"] = StyleEntry("#41b6c4", radius=0.0)
    scene = render_map(DHB, style)
    assert len(scene.polygons("hex")) == 19
    assert len(scene.texts()) == 19


def test_missing_unit_is_full_outline_without_label():
    style = all_filled(DHB)
    style["lakes"] = StyleEntry(MISSING)
    scene = render_map(DHB, style)
    outlines = [p for p in scene.polygons("hex") if p.fill is None]
    assert len(outlines) == 1
    centre = axial_to_center(DHB.unit("lakes").cell, CELL_RADIUS)
    assert all(math.dist(v, centre) == pytest.approx(CELL_RADIUS) for v in outlines[0].points)
    assert len(scene.texts()) == 19


def test_unknown_unit_in_style_rejected():
    with pytest.raises(DataError, match="atlantis"):
        render_map(DHB, {"atlantis": StyleEntry("#000000")})


def test_label_modes():
    full = render_map(DHB, all_filled(DHB), "full")
    assert "Tairāwhiti" in {t.text for t in full.texts()}
    assert {t.font_size for t in full.texts()} == {0.35 * CELL_RADIUS}
    abbrev = render_map(DHB, all_filled(DHB), "abbrev")
    assert {t.font_size for t in abbrev.texts()} == {0.5 * CELL_RADIUS}
    assert render_map(DHB, all_filled(DHB), "none").texts() == []
    with pytest.raises(ValueError):
        render_map(DHB, all_filled(DHB), "tiny")


def test_label_colour_follows_fill():
    dark = render_map(DHB, all_filled(DHB, "#08306b"))
    light = render_map(DHB, all_filled(DHB, "#ffffcc"))
    assert {t.colour for t in dark.texts()} == {"white"}
    assert {t.colour for t in light.texts()} == {"black"}


def test_hex_centres_match_registry():
    scene = render_map(DHB, all_filled(DHB))
    centres = [hex_centre(p) for p in scene.polygons("hex")]
    expected = [axial_to_center(u.cell, CELL_RADIUS) for u in DHB]
    for (cx, cy), e in zip(centres, expected):
        assert cx == pytest.approx(e.x, abs=1e-9) and cy == pytest.approx(e.y, abs=1e-9)


def test_canvas_is_bounding_box_plus_margin():
    scene = render_map(DHB, {})
    (offset, _), *_ = scene.walk()
    xs = [offset[0] + v.x for p in scene.polygons() for v in p.points]
    ys = [offset[1] + v.y for p in scene.polygons() for v in p.points]
    assert min(xs) == pytest.approx(CELL_RADIUS) and min(ys) == pytest.approx(CELL_RADIUS)
    assert scene.width - max(xs) == pytest.approx(CELL_RADIUS)
    assert scene.height - max(ys) == pytest.approx(CELL_RADIUS)


SIX = ["#66c2a5"] * 3 + ["#fc8d62"] * 3


def test_tri_map_counts():
    fills = {u.id: SIX for u in REGION}
    scene = render_tri_map(REGION, fills)
    assert len(scene.polygons("tri")) == 96
    assert len(svg_polygons(parse(scene), "tri")) == 96


def test_tri_map_slots_follow_triangle_order():
    scene = render_tri_map(REGION, {"gisborne": SIX})
    tris = scene.polygons("tri")
    assert [p.fill for p in tris] == SIX
    patch = HexPatch(axial_to_center(REGION.unit("gisborne").cell, CELL_RADIUS), CELL_RADIUS)
    for k, p in enumerate(tris):
        assert list(p.points) == triangle_vertices(patch, k)
    # the other 15 units are outlines
    assert len(scene.polygons("hex")) == 15


def test_tri_map_solid_hex():
    scene = render_tri_map(REGION, {"otago": ["#123456"] * 6})
    assert {p.fill for p in scene.polygons("tri")} == {"#123456"}


def test_tri_map_triangles_tile_unit_hex():
    scene = render_tri_map(REGION, {u.id: SIX for u in REGION})

    def area(pts):
        return abs(sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]))) / 2

    tris = scene.polygons("tri")
    for i in range(0, len(tris), 6):
        total = sum(area(list(p.points)) for p in tris[i : i + 6])
        assert total == pytest.approx(3 * math.sqrt(3) / 2 * CELL_RADIUS**2, rel=1e-9)


def test_tri_map_rejects_wrong_length():
    with pytest.raises(DataError, match="otago"):
        render_tri_map(REGION, {"otago": ["#123456"] * 5})


def test_legend():
    entries = [("a", "#111111"), ("b", "#222222"), ("c", "#333333"), ("d", "#444444")]
    legend = render_legend(entries)
    assert [p.fill for p in legend.polygons("swatch")] == [c for _, c in entries]
    assert [t.text for t in legend.texts()] == ["a", "b", "c", "d"]
    xs = [p.points[0].x for p in legend.polygons("swatch")]
    assert xs == sorted(xs)
    assert len(render_legend([("only", "#000000")]).polygons("swatch")) == 1


def panel(tag="x"):
    return render_map(DHB, {}, "none")


def group_offsets(scene):
    return [g.offset for g in scene.elements if isinstance(g, Group)]


def test_facets_grid_placement():
    panels = [(k, panel()) for k in "ABCD"]
    scene = render_facets(panels, FacetSpec(tuple("ABCD"), columns=2))
    w, h = panels[0][1].width, panels[0][1].height
    offsets = group_offsets(scene)
    title_h = FacetSpec(()).title_height
    for i, off in enumerate(offsets):
        assert off == (i % 2 * w, i // 2 * (h + title_h))
    assert [t.text for t in scene.texts()] == list("ABCD")
    assert len(scene.polygons("hex")) == 80
    assert scene.width == 2 * w and scene.height == 2 * (h + title_h)


def test_facets_ceiling_rows():
    panels = [(k, panel()) for k in "ABCDE"]
    scene = render_facets(panels, FacetSpec(tuple("ABCDE"), columns=2))
    rows = {off[1] for off in group_offsets(scene)}
    assert len(rows) == 3
    last_row = [off for off in group_offsets(scene) if off[1] == max(rows)]
    assert len(last_row) == 1


def test_single_facet_is_inner_scene_shifted_by_title():
    inner = render_map(DHB, all_filled(DHB))
    scene = render_facets([("only", inner)], FacetSpec(("only",), columns=1))
    spec = FacetSpec(())
    assert scene.width == inner.width
    assert scene.height == inner.height + spec.title_height
    outer = scene.walk()
    base = inner.walk()
    leaves = [(o, el) for o, el in outer if not (isinstance(el, Text) and el.text == "only")]
    assert len(leaves) == len(base)
    for (o1, e1), (o2, e2) in zip(leaves, base):
        assert e1 == e2
        assert o1 == (o2[0], o2[1] + spec.title_height)


def test_facet_legend_below_grid():
    legend = render_legend([("a", "#111111")])
    panels = [(k, panel()) for k in "AB"]
    scene = render_facets(panels, FacetSpec(("A", "B"), columns=2), legend)
    grid = render_facets(panels, FacetSpec(("A", "B"), columns=2))
    assert scene.height == grid.height + legend.height
    assert group_offsets(scene)[-1] == (0.0, grid.height)
    no_legend = render_facets(panels, FacetSpec(("A", "B"), columns=2, shared_legend=False), legend)
    assert no_legend.height == grid.height


def test_facets_follow_key_order():
    panels = [("B", panel()), ("A", panel())]
    scene = render_facets(panels, FacetSpec(("A", "B")))
    assert [t.text for t in scene.texts()] == ["A", "B"]


def test_facet_errors():
    with pytest.raises(ValueError):
        render_facets([], FacetSpec(()))
    with pytest.raises(ValueError):
        FacetSpec(("A", "A"))
    with pytest.raises(ValueError):
        FacetSpec(("A",), columns=0)
    odd = render_map(REGION, {})
    with pytest.raises(ValueError):
        render_facets([("A", panel()), ("B", odd)], FacetSpec(("A", "B")))


def test_to_svg_empty_scene():
    root = ET.fromstring(to_svg(Scene(10, 5)))
    assert root.tag == f"{SVG}svg"
    assert list(root) == []
    assert root.get("width") == "10.000" and root.get("height") == "5.000"


def test_to_svg_one_polygon_three_decimals():
    scene = Scene(10, 10, (Polygon(((0, 0), (1 / 3, 0), (0, 2 / 3)), "#ff0000", role="hex"),))
    out = to_svg(scene)
    root = ET.fromstring(out)
    polys = svg_polygons(root)
    assert len(polys) == 1
    assert polys[0].get("points") == "0.000,0.000 0.333,0.000 0.000,0.667"


def test_to_svg_negative_zero_normalised():
    out = to_svg(Scene(1, 1, (Polygon(((-0.0001, 0), (1, 0), (0, 1)), None),)))
    assert b"-0.000" not in out


def test_to_svg_escapes_text():
    out = to_svg(Scene(1, 1, (Text((0, 0), "A & <B>"),)))
    assert ET.fromstring(out).find(f"{SVG}text").text == "A & <B>"


def test_to_svg_deterministic_and_counts_match():
    scene = with_legend(render_map(DHB, all_filled(DHB)), render_legend([("a", "#111111")]))
    a, b = to_svg(scene), to_svg(scene)
    assert a == b
    assert len(svg_polygons(ET.fromstring(a))) == len(scene.polygons())


def test_svg_has_no_external_references():
    out = to_svg(render_map(DHB, all_filled(DHB), "full")).decode("utf-8")
    assert "href" not in out and "http://" not in out.replace("http://www.w3.org/2000/svg", "")
