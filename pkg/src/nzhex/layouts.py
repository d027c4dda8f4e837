"""Built-in hex tile layouts for District Health Boards and Regions.

Cells use axial coordinates (see :mod:`nzhex.hexgeom`); row ``r`` grows
southward and each row is offset half a cell east of the one above. The
placements follow the published hexagonal layouts. Two known distortions
are kept on purpose: MidCentral is enclosed on all six sides, and West Coast
does not touch Southern (DHBs) or Southland (Regions).
"""

from __future__ import annotations

import unicodedata
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .errors import AmbiguousNameError, UnknownUnitError
from .hexgeom import AxialCoord

KINDS = ("dhb", "region")
NORTH = "North"
SOUTH = "South"


@dataclass(frozen=True)
class Unit:
    id: str
    name: str
    abbrev: str
    island: str
    cell: AxialCoord


@dataclass(frozen=True)
class Layout:
    kind: str
    units: tuple[Unit, ...]

    def __iter__(self) -> Iterator[Unit]:
        return iter(self.units)

    def __len__(self) -> int:
        return len(self.units)

    def unit(self, unit_id: str) -> Unit:
        for u in self.units:
            if u.id == unit_id:
                return u
        raise KeyError(unit_id)

    @property
    def ids(self) -> list[str]:
        return [u.id for u in self.units]


def strip_macrons(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def slugify(name: str) -> str:
    plain = strip_macrons(name).lower().replace("'", "")
    out = []
    for ch in plain:
        out.append(ch if ch.isascii() and ch.isalnum() else "-")
    return "-".join(part for part in "".join(out).split("-") if part)


def _unit(name, abbrev, island, q, r):
    return Unit(slugify(name), name, abbrev, island, AxialCoord(q, r))


# Each comment gives the row and the horizontal position c = q + r/2.
_DHB = (
    _unit("Northland", "NL", NORTH, 0, 0),  # r0 c0
    _unit("Waitematā", "WM", NORTH, 0, 1),  # r1 c0.5
    _unit("Auckland", "AK", NORTH, -1, 2),  # r2 c0
    _unit("Counties Manukau", "CM", NORTH, 0, 2),  # r2 c1
    _unit("Waikato", "WA", NORTH, -1, 3),  # r3 c0.5
    _unit("Bay of Plenty", "BP", NORTH, 0, 3),  # r3 c1.5
    _unit("Tairāwhiti", "TW", NORTH, 1, 3),  # r3 c2.5
    _unit("Taranaki", "TK", NORTH, -2, 4),  # r4 c0
    _unit("Lakes", "LA", NORTH, -1, 4),  # r4 c1
    _unit("Hawke's Bay", "HB", NORTH, 0, 4),  # r4 c2
    _unit("Whanganui", "WG", NORTH, -2, 5),  # r5 c0.5
    _unit("MidCentral", "MC", NORTH, -1, 5),  # r5 c1.5, enclosed on all sides
    # ambiguous in the figure: Wairarapa could sit one row lower; kept here so
    # MidCentral stays enclosed
    _unit("Wairarapa", "WA", NORTH, 0, 5),  # r5 c2.5
    _unit("Capital and Coast", "CC", NORTH, -2, 6),  # r6 c1
    _unit("Hutt Valley", "HV", NORTH, -1, 6),  # r6 c2
    _unit("Nelson Marlborough", "NM", SOUTH, -4, 7),  # r7 c-0.5
    _unit("West Coast", "WC", SOUTH, -5, 8),  # r8 c-1
    _unit("Canterbury", "CB", SOUTH, -4, 8),  # r8 c0
    _unit("South Canterbury", "SC", SOUTH, -4, 9),  # r9 c0.5
    # ambiguous: a cell at r9 c0 would also fit, but would touch West Coast
    _unit("Southern", "SN", SOUTH, -5, 10),  # r10 c0
)

_REGION = (
    _unit("Northland", "NL", NORTH, 0, 0),  # r0 c0
    _unit("Auckland", "AK", NORTH, 0, 1),  # r1 c0.5
    _unit("Waikato", "WK", NORTH, -1, 2),  # r2 c0
    _unit("Bay of Plenty", "BP", NORTH, 0, 2),  # r2 c1
    _unit("Gisborne", "GI", NORTH, 1, 2),  # r2 c2
    _unit("Taranaki", "TA", NORTH, -2, 3),  # r3 c-0.5
    _unit("Manawatū-Whanganui", "MW", NORTH, -1, 3),  # r3 c0.5
    _unit("Hawke's Bay", "HB", NORTH, 0, 3),  # r3 c1.5
    _unit("Wellington", "WE", NORTH, -1, 4),  # r4 c1
    _unit("Nelson", "NE", SOUTH, -3, 6),  # r6 c0, the convex tip at Nelson
    _unit("Tasman", "TA", SOUTH, -4, 7),  # r7 c-0.5
    _unit("Marlborough", "MA", SOUTH, -3, 7),  # r7 c0.5
    _unit("West Coast", "WC", SOUTH, -5, 8),  # r8 c-1
    _unit("Canterbury", "CA", SOUTH, -4, 8),  # r8 c0
    _unit("Otago", "OT", SOUTH, -5, 9),  # r9 c-0.5
    _unit("Southland", "SO", SOUTH, -6, 10),  # r10 c-1
)

_BUILTIN = {"dhb": Layout("dhb", _DHB), "region": Layout("region", _REGION)}


def builtin_layout(kind: str) -> Layout:
    try:
        return _BUILTIN[kind]
    except KeyError:
        raise ValueError(f"unknown layout kind {kind!r}; expected one of {KINDS}") from None


def _fold(text: str) -> str:
    return strip_macrons(text.strip()).casefold()


def edit_distance(a: str, b: str) -> int:
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb)))
        previous = current
    return previous[-1]


def resolve_name(text: str, layout: Layout) -> str:
    """Unit id for a full name or abbreviation.

    Matching ignores case, macrons and surrounding whitespace. Full names
    are tried before abbreviations.
    """
    key = _fold(text)
    if not key:
        raise UnknownUnitError(text, [])
    for attr in ("name", "abbrev"):
        hits = [u for u in layout.units if _fold(getattr(u, attr)) == key]
        if len(hits) == 1:
            return hits[0].id
        if len(hits) > 1:
            raise AmbiguousNameError(text, [u.name for u in hits])
    ranked = sorted(layout.units, key=lambda u: (edit_distance(key, _fold(u.name)), u.name))
    raise UnknownUnitError(text, [u.name for u in ranked[:3]])


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" or "warning"
    code: str
    message: str
    units: tuple[str, ...] = ()


def _components(cells: set[AxialCoord]) -> list[set[AxialCoord]]:
    remaining = set(cells)
    parts = []
    while remaining:
        start = min(remaining)
        seen = {start}
        queue = deque([start])
        while queue:
            for nb in queue.popleft().neighbours():
                if nb in remaining and nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        remaining -= seen
        parts.append(seen)
    return parts


def validate_layout(layout: Layout) -> list[Finding]:
    findings = []
    by_cell: dict[AxialCoord, list[str]] = {}
    for u in layout.units:
        by_cell.setdefault(u.cell, []).append(u.id)
    for cell, ids in sorted(by_cell.items()):
        if len(ids) > 1:
            findings.append(
                Finding("error", "duplicate-cell", f"cell ({cell.q}, {cell.r}) holds {ids}", tuple(ids))
            )

    seen_ids: set[str] = set()
    for u in layout.units:
        if u.id in seen_ids:
            findings.append(Finding("error", "duplicate-id", f"unit id {u.id!r} repeated", (u.id,)))
        seen_ids.add(u.id)

    for island in (NORTH, SOUTH):
        cells = {u.cell for u in layout.units if u.island == island}
        parts = _components(cells)
        if len(parts) > 1:
            ids = tuple(u.id for u in layout.units if u.island == island)
            findings.append(
                Finding(
                    "warning",
                    "island-disconnected",
                    f"{island} Island cells form {len(parts)} separate groups",
                    ids,
                )
            )

    occupied = set(by_cell)
    for u in layout.units:
        if not any(nb in occupied for nb in u.cell.neighbours()):
            findings.append(Finding("warning", "isolated-cell", f"{u.id} has no neighbours", (u.id,)))
    return findings


def dump_layout(layout: Layout) -> str:
    """Tab-separated table, one unit per line, with a header row."""
    lines = ["id\tname\tabbrev\tisland\tq\tr"]
    for u in layout.units:
        lines.append(f"{u.id}\t{u.name}\t{u.abbrev}\t{u.island}\t{u.cell.q}\t{u.cell.r}")
    return "\n".join(lines) + "\n"
