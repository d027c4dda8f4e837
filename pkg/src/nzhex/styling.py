"""Map data values to fills, radius fractions and label colours."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Optional, Sequence

from .errors import DataError


class _Missing:
    """Marker for a unit with no usable data; drawn as an empty outline."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MISSING"

    def __bool__(self):
        return False


MISSING = _Missing()

_HEX_COLOUR = re.compile(r"^#[0-9A-Fa-f]{6}$")
LUMINANCE_THRESHOLD = 0.179


def parse_colour(colour: str) -> tuple[int, int, int]:
    if not isinstance(colour, str) or not _HEX_COLOUR.match(colour):
        raise ValueError(f"colour must look like #RRGGBB, got {colour!r}")
    return int(colour[1:3], 16), int(colour[3:5], 16), int(colour[5:7], 16)


@dataclass(frozen=True)
class Palette:
    colours: tuple[str, ...]

    def __post_init__(self):
        colours = tuple(self.colours)
        object.__setattr__(self, "colours", colours)
        if not colours:
            raise ValueError("a palette needs at least one colour")
        for c in colours:
            parse_colour(c)

    def __len__(self):
        return len(self.colours)

    def __getitem__(self, i):
        return self.colours[i]


def _palette_data() -> dict:
    text = resources.files("nzhex").joinpath("palettes.json").read_text(encoding="utf-8")
    return json.loads(text)


def sequential_palette(n: int = 4) -> Palette:
    """Shipped light-to-dark ramp with ``n`` steps (3 to 7 available)."""
    ramps = _palette_data()["sequential"]
    if str(n) not in ramps:
        raise ValueError(f"no built-in sequential palette with {n} colours; supply one explicitly")
    return Palette(tuple(ramps[str(n)]))


def qualitative_palette(n: int) -> Palette:
    colours = _palette_data()["qualitative"]
    if n > len(colours):
        raise ValueError(f"built-in categorical palette has {len(colours)} colours, {n} needed")
    return Palette(tuple(colours[:n]))


@dataclass(frozen=True)
class Breaks:
    """Cut points for half-open bins ``[cut_i, cut_{i+1})``.

    With ``open_low`` the values below the first cut form bin 0; with
    ``open_high`` the values at or above the last cut form the top bin.
    """

    cuts: tuple[float, ...]
    open_low: bool = True
    open_high: bool = True

    def __post_init__(self):
        cuts = tuple(float(c) for c in self.cuts)
        object.__setattr__(self, "cuts", cuts)
        if not cuts:
            raise ValueError("at least one cut point is required")
        if any(not math.isfinite(c) for c in cuts):
            raise ValueError(f"cut points must be finite: {cuts}")
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise ValueError(f"cut points must be strictly increasing: {cuts}")

    @property
    def n_bins(self) -> int:
        return len(self.cuts) - 1 + self.open_low + self.open_high

    def labels(self) -> list[str]:
        cuts = [str(int(c)) if c.is_integer() else f"{c:g}" for c in self.cuts]
        out = []
        if self.open_low:
            out.append(f"<{cuts[0]}")
        out.extend(f"{lo}-{hi}" for lo, hi in zip(cuts, cuts[1:]))
        if self.open_high:
            out.append(f"≥{cuts[-1]}")
        return out


def bin_value(x: float, breaks: Breaks) -> int:
    cuts = breaks.cuts
    if not math.isfinite(x):
        raise DataError(f"value {x!r} is not finite")
    below = 0
    while below < len(cuts) and cuts[below] <= x:
        below += 1
    # below == number of cuts at or under x
    if below == 0:
        if not breaks.open_low:
            raise DataError(f"value {x:g} is below the lowest cut {cuts[0]:g}")
        return 0
    if below == len(cuts) and not breaks.open_high:
        raise DataError(f"value {x:g} is at or above the highest cut {cuts[-1]:g}")
    return below - 1 + breaks.open_low


def radius_sqrt(values: Mapping[str, Optional[float]]) -> dict:
    """Radius fractions with hex area proportional to value.

    The largest value gets radius 1.0. ``None`` values come back as MISSING.
    """
    present = {}
    for unit, v in values.items():
        if v is None or v is MISSING:
            continue
        if v < 0:
            raise DataError(f"{unit}: negative size value {v!r}")
        present[unit] = v
    top = max(present.values(), default=0)
    if not top > 0:
        raise DataError("size values are all zero or missing")
    return {
        unit: MISSING if unit not in present else math.sqrt(present[unit] / top)
        for unit in values
    }


def _linearise(channel: int) -> float:
    s = channel / 255.0
    return s / 12.92 if s <= 0.04045 else ((s + 0.055) / 1.055) ** 2.4


def relative_luminance(colour: str) -> float:
    r, g, b = parse_colour(colour)
    return 0.2126 * _linearise(r) + 0.7152 * _linearise(g) + 0.0722 * _linearise(b)


def label_colour(fill: str) -> str:
    """``"black"`` or ``"white"``, whichever contrasts more with ``fill``."""
    return "black" if relative_luminance(fill) > LUMINANCE_THRESHOLD else "white"


@dataclass(frozen=True)
class StyleEntry:
    fill: object = MISSING  # "#RRGGBB" or MISSING
    radius: float = 1.0
    label: Optional[str] = None  # overrides the layout name/abbrev
    label_colour: Optional[str] = None

    def __post_init__(self):
        if self.fill is not MISSING:
            parse_colour(self.fill)
        if not 0.0 <= self.radius <= 1.0:
            raise ValueError(f"radius fraction must be in [0, 1], got {self.radius!r}")

    @property
    def text_colour(self) -> str:
        if self.label_colour is not None:
            return self.label_colour
        if self.fill is MISSING:
            return "black"
        return label_colour(self.fill)


def choropleth_style(
    values: Mapping[str, Optional[float]],
    breaks: Breaks,
    palette: Sequence[str],
    radii: Optional[Mapping[str, object]] = None,
) -> dict[str, StyleEntry]:
    """Binned-fill stylesheet; ``None`` values and MISSING radii become MISSING."""
    if len(palette) != breaks.n_bins:
        raise ValueError(f"{breaks.n_bins} bins need {breaks.n_bins} colours, got {len(palette)}")
    sheet = {}
    for unit, v in values.items():
        radius = 1.0 if radii is None else radii.get(unit, MISSING)
        if v is None or v is MISSING or radius is MISSING:
            sheet[unit] = StyleEntry()
            continue
        try:
            fill = palette[bin_value(v, breaks)]
        except DataError as exc:
            raise DataError(f"{unit}: {exc}") from exc
        sheet[unit] = StyleEntry(fill=fill, radius=radius)
    return sheet
