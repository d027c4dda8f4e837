"""Command-line front end.

    nzhex hex   --layout dhb --in d.csv --unit-col dhb --value-col coverage \\
                --breaks 0.80,0.90,0.95 --out map.svg
    nzhex tri   --layout region --in eth.csv --unit-col region \\
                --count-cols euro,maori,asian,pacific --out tri.svg
    nzhex facet --layout dhb --in d.csv --unit-col dhb --value-col coverage \\
                --facet-col ethnicity --breaks 0.80,0.90,0.95 \\
                --min-denominator 70 --denominator-col children --out facets.svg
    nzhex layout --layout dhb

Exit codes: 0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .apportion import tri_alloc
from .errors import NZHexError, UsageError
from .ingest import Bindings, Dataset, apply_suppression, ingest_csv
from .layouts import KINDS, builtin_layout, dump_layout
from .render import (
    LABEL_MODES,
    FacetSpec,
    render_facets,
    render_legend,
    render_map,
    render_tri_map,
    to_svg,
    with_legend,
)
from .styling import MISSING, Breaks, Palette, choropleth_style, qualitative_palette, radius_sqrt, sequential_palette

MODES = ("hex", "tri", "facet")


@dataclass(frozen=True)
class JobConfig:
    mode: str
    layout: str
    input: Optional[Path]
    output: Optional[Path]
    bindings: Optional[Bindings] = None
    breaks: Optional[Breaks] = None
    palette: Optional[Palette] = None
    label_mode: str = "abbrev"
    min_denominator: float = 0.0
    columns: int = 2


def _csv_list(text: str) -> list[str]:
    items = [item.strip() for item in text.split(",")]
    if not all(items):
        raise argparse.ArgumentTypeError(f"empty item in list {text!r}")
    return items


def _breaks(text: str) -> Breaks:
    try:
        return Breaks(tuple(float(x) for x in _csv_list(text)))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _palette(text: str) -> Palette:
    try:
        return Palette(tuple(_csv_list(text)))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nzhex", description="Hexagonal tile maps of NZ DHBs and Regions.")
    sub = parser.add_subparsers(dest="mode", required=True)

    for mode, help_text in (
        ("hex", "binned choropleth, optionally sized by a second column"),
        ("tri", "six-triangle category map from wide or long counts"),
        ("facet", "small multiples, one choropleth per facet value"),
    ):
        p = sub.add_parser(mode, help=help_text)
        p.add_argument("--layout", choices=KINDS, required=True)
        p.add_argument("--in", dest="input", type=Path, required=True, metavar="FILE")
        p.add_argument("--out", dest="output", type=Path, required=True, metavar="FILE")
        p.add_argument("--unit-col", required=True, metavar="NAME")
        p.add_argument("--value-col", metavar="NAME")
        p.add_argument("--count-cols", type=_csv_list, metavar="A,B,C")
        p.add_argument("--key-col", metavar="NAME")
        p.add_argument("--val-col", metavar="NAME")
        p.add_argument("--facet-col", metavar="NAME")
        p.add_argument("--breaks", type=_breaks, metavar="X,Y,...")
        p.add_argument("--palette", type=_palette, metavar="#RRGGBB,...")
        p.add_argument("--radius-col", metavar="NAME")
        p.add_argument("--labels", choices=LABEL_MODES, default="abbrev")
        p.add_argument("--min-denominator", type=_nonneg, default=0.0, metavar="N")
        p.add_argument("--denominator-col", metavar="NAME")
        p.add_argument("--columns", type=_positive_int, default=2, help="facet grid columns")

    p = sub.add_parser("layout", help="print a built-in layout as a tab-separated table")
    p.add_argument("--layout", choices=KINDS, required=True)
    p.add_argument("--out", dest="output", type=Path, metavar="FILE")
    return parser


def _check_combination(args) -> Optional[str]:
    wide = args.count_cols is not None
    long_ = args.key_col is not None or args.val_col is not None
    if args.mode in ("hex", "facet"):
        if args.value_col is None:
            return f"{args.mode} mode needs --value-col"
        if wide or long_:
            return f"{args.mode} mode takes --value-col, not --count-cols or --key-col/--val-col"
        if args.breaks is None:
            return f"{args.mode} mode needs --breaks"
        if args.mode == "facet" and args.facet_col is None:
            return "facet mode needs --facet-col"
        if args.mode == "hex" and args.facet_col is not None:
            return "--facet-col is only valid in facet mode"
        if args.palette is not None and len(args.palette) != args.breaks.n_bins:
            return f"--breaks gives {args.breaks.n_bins} bins but --palette has {len(args.palette)} colours"
    else:
        if args.value_col is not None or args.facet_col is not None or args.radius_col is not None:
            return "tri mode takes --count-cols or --key-col/--val-col only"
        if args.breaks is not None:
            return "--breaks is not used in tri mode"
        if wide == long_:
            return "tri mode needs either --count-cols or both --key-col and --val-col"
        if long_ and (args.key_col is None or args.val_col is None):
            return "long format needs both --key-col and --val-col"
    if args.min_denominator > 0 and args.denominator_col is None:
        return "--min-denominator needs --denominator-col"
    return None


def parse_args(argv: Optional[Sequence[str]] = None) -> JobConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.mode == "layout":
        return JobConfig("layout", args.layout, None, args.output)
    problem = _check_combination(args)
    if problem:
        parser.error(problem)
    bindings = Bindings(
        unit_col=args.unit_col,
        value_col=args.value_col,
        count_cols=tuple(args.count_cols or ()),
        key_col=args.key_col,
        val_col=args.val_col,
        facet_col=args.facet_col,
        radius_col=args.radius_col,
        denominator_col=args.denominator_col,
    )
    return JobConfig(
        mode=args.mode,
        layout=args.layout,
        input=args.input,
        output=args.output,
        bindings=bindings,
        breaks=args.breaks,
        palette=args.palette,
        label_mode=args.labels,
        min_denominator=args.min_denominator,
        columns=args.columns,
    )


class StageError(Exception):
    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")


class _stage:
    """Tag any failure inside the block with the pipeline stage name."""

    def __init__(self, name):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and isinstance(exc, (NZHexError, ValueError, OSError)):
            raise StageError(self.name, exc) from exc
        return False


def _sequential(config: JobConfig) -> Palette:
    if config.palette is not None:
        return config.palette
    try:
        return sequential_palette(config.breaks.n_bins)
    except ValueError as exc:
        raise UsageError(f"{exc} (use --palette)") from None


def _radii(dataset: Dataset, config: JobConfig):
    if config.bindings.radius_col is None:
        return None
    sizes = {key: (rec.radius if rec is not MISSING else None) for key, rec in dataset.records.items()}
    return radius_sqrt(sizes)


def _choropleth(dataset: Dataset, facet, radii, config: JobConfig, palette: Palette):
    panel = dataset.panel(facet)
    values = {unit: (rec.value if rec is not MISSING else None) for unit, rec in panel.items()}
    panel_radii = None if radii is None else {unit: radii[(unit, facet)] for unit in panel}
    style = choropleth_style(values, config.breaks, palette.colours, panel_radii)
    return render_map(dataset.layout, style, config.label_mode)


def build_scene(config: JobConfig):
    layout = builtin_layout(config.layout)
    with _stage("ingest"):
        dataset = ingest_csv(config.input, layout, config.bindings)
    with _stage("suppress"):
        dataset = apply_suppression(dataset, config.min_denominator, config.bindings.denominator_col)

    if config.mode == "tri":
        with _stage("apportion"):
            labels = dataset.labels
            palette = config.palette or qualitative_palette(len(labels))
            if len(palette) < len(labels):
                raise UsageError(f"{len(labels)} categories but --palette has {len(palette)} colours")
            colour_of = dict(zip(labels, palette.colours))
            present = [(unit, rec.counts) for unit, rec in dataset.panel().items() if rec is not MISSING]
            slots = tri_alloc(present)
            fills = {unit: [colour_of[label] for label in labels_] for unit, labels_ in slots.items()}
        with _stage("render"):
            scene = render_tri_map(layout, fills, config.label_mode)
            legend = render_legend([(str(label), colour_of[label]) for label in labels])
            return with_legend(scene, legend)

    with _stage("style"):
        palette = _sequential(config)
        radii = _radii(dataset, config)
        legend_entries = list(zip(config.breaks.labels(), palette.colours))
    with _stage("render"):
        legend = render_legend(legend_entries)
        if config.mode == "hex":
            return with_legend(_choropleth(dataset, None, radii, config, palette), legend)
        panels = [(facet, _choropleth(dataset, facet, radii, config, palette)) for facet in dataset.facets]
        spec = FacetSpec(tuple(dataset.facets), columns=config.columns)
        return render_facets(panels, spec, legend)


def write_atomic(path: Path, data: bytes) -> None:
    """Write via a temporary file in the same directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def run(config: JobConfig) -> int:
    try:
        if config.mode == "layout":
            text = dump_layout(builtin_layout(config.layout))
            if config.output is None:
                sys.stdout.write(text)
            else:
                with _stage("write"):
                    write_atomic(config.output, text.encode("utf-8"))
            return 0
        scene = build_scene(config)
        with _stage("write"):
            write_atomic(config.output, to_svg(scene))
    except StageError as exc:
        print(f"nzhex: {exc}", file=sys.stderr)
        return 2 if isinstance(exc.cause, UsageError) else 1
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
