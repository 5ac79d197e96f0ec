"""Benchmark command line.

Subcommands:

- ``run``      run a suite described by flags and/or a JSON config file
- ``figure2``  preset: five policies + serial, 5-D, noiseless
- ``figure3``  preset: pessimistic vs serial across dimensions 2..6
- ``figure4``  preset: pessimistic vs serial under observation noise
- ``plot``     re-render SVG charts from a previously written CSV

Exit codes: 0 success, 1 configuration error, 2 campaign/runtime failure,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields, replace
from pathlib import Path

from asyncbo.bench import PRESETS, SuiteConfig, read_csv, run_suite
from asyncbo.campaign import CampaignError
from asyncbo.svgplot import PlotStyle, render_svg

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_IO = 3

_SUITE_FIELDS = {f.name for f in fields(SuiteConfig)}

_RUN_DEFAULTS = SuiteConfig(
    policies=("serial", "pessimistic"),
    buffers=(0, 1, 4, 9),
    dims=(5,),
    noise=(0.0,),
)


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; remap to the config code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _add_suite_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON file with SuiteConfig fields")
    p.add_argument("--policies", nargs="+", metavar="NAME")
    p.add_argument("--buffers", nargs="+", type=int, metavar="N", help="0 means serial")
    p.add_argument("--dims", nargs="+", type=int, metavar="D")
    p.add_argument("--noise", nargs="+", type=float, metavar="STD")
    p.add_argument("--replicates", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--init-count", type=int, dest="init_count")
    p.add_argument("--seed", type=int)
    p.add_argument("--candidates-per-dim", type=int, dest="candidates_per_dim")
    p.add_argument("--out", dest="output_dir")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--force", action="store_true", help="recompute cached cells")
    p.add_argument("--log-y", action="store_true", help="log-scale loss axes in charts")


def build_parser() -> _Parser:
    parser = _Parser(prog="asyncbo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("run", "figure2", "figure3", "figure4"):
        p = sub.add_parser(name, help=f"run the {name} suite" if name != "run" else "run a suite")
        _add_suite_flags(p)
    plot = sub.add_parser("plot", help="render SVG charts from a curves CSV")
    plot.add_argument("csv", type=Path)
    plot.add_argument("--out", dest="output_dir", help="directory for SVG files")
    plot.add_argument("--log-y", action="store_true")
    plot.add_argument("--title", default="")
    return parser


def _load_config_file(path: Path) -> dict:
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    unknown = set(raw) - _SUITE_FIELDS
    if unknown:
        raise ConfigError(f"unknown config keys in {path}: {', '.join(sorted(unknown))}")
    return raw


def _suite_from_args(args) -> SuiteConfig:
    if args.command == "run":
        base = _RUN_DEFAULTS
    else:
        base = PRESETS[args.command]()
    overrides: dict = {}
    if args.config is not None:
        overrides.update(_load_config_file(args.config))
    for name in _SUITE_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    try:
        return replace(base, **overrides)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def _render_groups(curves, out_dir: Path, stem: str, log_y: bool, title: str) -> list[Path]:
    """One SVG per (dimension, noise) group; grouping keys go in the name."""
    groups: dict[tuple[int, float], list] = {}
    for c in curves:
        groups.setdefault((c.dimension, c.noise_std), []).append(c)
    written = []
    for (dim, noise), group in sorted(groups.items()):
        name = f"{stem}_d{dim}_n{noise!r}.svg"
        path = out_dir / name
        label = title or f"{stem} (D={dim}, noise={noise!r})"
        render_svg(group, PlotStyle(log_y=log_y, title=label), path)
        written.append(path)
    return written


def _cmd_suite(args) -> int:
    cfg = _suite_from_args(args)
    say = lambda msg: print(msg, file=sys.stderr)  # noqa: E731
    result = run_suite(cfg, workers=args.workers, force=args.force, log=say)
    if result.curves:
        say(f"wrote {result.csv_path}")
        out = Path(cfg.output_dir)
        for path in _render_groups(result.curves, out, args.command, args.log_y, ""):
            say(f"wrote {path}")
    for cell, err in sorted(result.failures.items()):
        print(f"cell failed: {cell}: {err}", file=sys.stderr)
    return EXIT_RUNTIME if result.failures else EXIT_OK


def _cmd_plot(args) -> int:
    curves = read_csv(args.csv)
    out_dir = Path(args.output_dir) if args.output_dir else args.csv.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    for path in _render_groups(curves, out_dir, args.csv.stem, args.log_y, args.title):
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "plot":
            return _cmd_plot(args)
        return _cmd_suite(args)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CampaignError as exc:
        print(f"campaign failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
