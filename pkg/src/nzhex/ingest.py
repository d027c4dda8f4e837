"""CSV ingestion: resolve unit names, pivot long data, suppress small denominators."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .apportion import CategoryCounts
from .errors import DataError, UsageError
from .layouts import Layout, resolve_name
from .styling import MISSING

NA_STRINGS = ("", "NA")


@dataclass(frozen=True)
class Bindings:
    """Which CSV columns feed which role.

    Set exactly one of ``value_col`` (one number per row), ``count_cols``
    (wide category counts) or ``key_col`` + ``val_col`` (long category
    counts). ``facet_col`` splits ``value_col`` data into panels.
    """

    unit_col: str
    value_col: Optional[str] = None
    count_cols: tuple[str, ...] = ()
    key_col: Optional[str] = None
    val_col: Optional[str] = None
    facet_col: Optional[str] = None
    radius_col: Optional[str] = None
    denominator_col: Optional[str] = None

    @property
    def shape(self) -> str:
        chosen = [
            name
            for name, is_set in (
                ("value", self.value_col is not None),
                ("wide", bool(self.count_cols)),
                ("long", self.key_col is not None or self.val_col is not None),
            )
            if is_set
        ]
        if len(chosen) != 1:
            raise UsageError(
                "set exactly one of a value column, count columns, or long-format key/value columns"
            )
        if chosen[0] == "long" and (self.key_col is None or self.val_col is None):
            raise UsageError("long format needs both a key column and a value column")
        return chosen[0]


@dataclass(frozen=True)
class Record:
    unit: str
    facet: Optional[str] = None
    value: Optional[float] = None
    counts: Optional[CategoryCounts] = None
    radius: Optional[float] = None
    denominator: Optional[float] = None
    lines: tuple[int, ...] = ()


@dataclass
class Dataset:
    """Per (unit, facet) records; units without data map to MISSING."""

    layout: Layout
    records: dict
    facets: list
    labels: tuple = ()

    def panel(self, facet=None) -> dict:
        return {unit: self.records[(unit, facet)] for unit in self.layout.ids}


def parse_number(text: Optional[str], column: str, line: int) -> Optional[float]:
    if text is None:
        raise DataError(f"line {line}: row is short, no {column!r} field")
    text = text.strip()
    if text in NA_STRINGS:
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"line {line}: {column!r} is not a number: {text!r}") from None
    if not math.isfinite(value):
        raise DataError(f"line {line}: {column!r} is not finite: {text!r}")
    return value


def _read_rows(path, required):
    path = Path(path)
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty file")
        absent = [c for c in required if c not in reader.fieldnames]
        if absent:
            raise DataError(f"{path}: missing column(s) {', '.join(absent)}; header is {reader.fieldnames}")
        rows = []
        for row in reader:
            if None in row:
                raise DataError(f"line {reader.line_num}: more fields than the header")
            rows.append((reader.line_num, row))
    if not rows:
        raise DataError(f"{path}: no data rows")
    return rows


def _resolve(text, layout, line):
    try:
        return resolve_name(text, layout)
    except DataError as exc:
        raise DataError(f"line {line}: {exc}") from exc


def ingest_csv(path, layout: Layout, bindings: Bindings) -> Dataset:
    shape = bindings.shape
    optional = [c for c in (bindings.facet_col, bindings.radius_col, bindings.denominator_col) if c]
    if shape == "value":
        required = [bindings.unit_col, bindings.value_col]
    elif shape == "wide":
        required = [bindings.unit_col, *bindings.count_cols]
    else:
        required = [bindings.unit_col, bindings.key_col, bindings.val_col]
    rows = _read_rows(path, required + optional)

    if shape == "long":
        records, labels = _pivot_long(rows, layout, bindings)
    else:
        records, labels = _read_wide(rows, layout, bindings, shape)

    facets = []
    for _, facet in records:
        if facet not in facets:
            facets.append(facet)
    if not facets:
        facets = [None]
    full = {}
    for facet in facets:
        for unit in layout.ids:
            full[(unit, facet)] = records.get((unit, facet), MISSING)
    return Dataset(layout, full, facets, labels)


def _row_key(row, layout, bindings, line):
    unit = _resolve(row[bindings.unit_col], layout, line)
    facet = None
    if bindings.facet_col:
        facet = row[bindings.facet_col].strip()
        if not facet:
            raise DataError(f"line {line}: empty {bindings.facet_col!r}")
    return unit, facet


def _optional(row, column, line):
    return parse_number(row[column], column, line) if column else None


def _read_wide(rows, layout, bindings, shape):
    records = {}
    seen_lines = {}
    labels = tuple(bindings.count_cols)
    for line, row in rows:
        key = _row_key(row, layout, bindings, line)
        if key in seen_lines:
            raise DataError(f"line {line}: duplicate row for {_describe(key)} (first at line {seen_lines[key]})")
        seen_lines[key] = line
        radius = _optional(row, bindings.radius_col, line)
        denominator = _optional(row, bindings.denominator_col, line)
        if shape == "value":
            value = parse_number(row[bindings.value_col], bindings.value_col, line)
            if value is None:
                records[key] = MISSING
                continue
            records[key] = Record(key[0], key[1], value=value, radius=radius, denominator=denominator, lines=(line,))
        else:
            counts = [parse_number(row[c], c, line) for c in bindings.count_cols]
            if any(c is None for c in counts):
                records[key] = MISSING
                continue
            try:
                cc = CategoryCounts(labels, tuple(counts))
            except DataError as exc:
                raise DataError(f"line {line}: {key[0]}: {exc}") from exc
            records[key] = Record(key[0], key[1], counts=cc, radius=radius, denominator=denominator, lines=(line,))
    return records, labels


def _pivot_long(rows, layout, bindings):
    labels = []
    cells = {}  # (unit, facet) -> {label: count}
    lines = {}
    denominators = {}
    for line, row in rows:
        key = _row_key(row, layout, bindings, line)
        label = row[bindings.key_col].strip()
        if not label:
            raise DataError(f"line {line}: empty {bindings.key_col!r}")
        if label not in labels:
            labels.append(label)
        bucket = cells.setdefault(key, {})
        if label in bucket:
            raise DataError(f"line {line}: duplicate row for {_describe(key)}, category {label!r}")
        bucket[label] = parse_number(row[bindings.val_col], bindings.val_col, line)
        lines.setdefault(key, []).append(line)
        denominator = _optional(row, bindings.denominator_col, line)
        if key in denominators and denominators[key] != denominator:
            raise DataError(f"line {line}: {_describe(key)} has conflicting denominators")
        denominators[key] = denominator

    records = {}
    for key, bucket in cells.items():
        counts = [bucket.get(label, 0) for label in labels]
        if any(c is None for c in counts):
            records[key] = MISSING
            continue
        try:
            cc = CategoryCounts(tuple(labels), tuple(counts))
        except DataError as exc:
            raise DataError(f"lines {lines[key]}: {key[0]}: {exc}") from exc
        records[key] = Record(key[0], key[1], counts=cc, denominator=denominators[key], lines=tuple(lines[key]))
    return records, tuple(labels)


def _describe(key):
    unit, facet = key
    return unit if facet is None else f"{unit} / {facet}"


def apply_suppression(dataset: Dataset, threshold: float, denominator_col: Optional[str] = None) -> Dataset:
    """Replace records whose denominator is under ``threshold`` with MISSING.

    A record with no recorded denominator is also suppressed once a
    threshold is active. A threshold of 0 leaves the data untouched.
    """
    if threshold < 0:
        raise UsageError(f"suppression threshold must be >= 0, got {threshold!r}")
    if threshold == 0:
        return dataset
    if denominator_col is None:
        raise UsageError("a suppression threshold needs a denominator column")
    records = {}
    for key, rec in dataset.records.items():
        if rec is not MISSING and (rec.denominator is None or rec.denominator < threshold):
            rec = MISSING
        records[key] = rec
    return replace(dataset, records=records)
