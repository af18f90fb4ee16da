"""Command line entry point: ``decaylab list | run | verify``.

Exit codes: 0 success, 1 verification failure, 2 config or usage error.
Output goes to ``--out`` or, if absent, to ``$DECAYLAB_OUT`` (default
``./decaylab-out``).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .scenarios.catalog import builtin_catalog, catalog_by_id, get_scenario
from .scenarios.config import ConfigError, load
from .scenarios.runner import run_scenario
from .scenarios.verify import OUT_ENV, default_out_dir, verify_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _cmd_list(args) -> int:
    rows = [(c.id, c.kind, str(c.dim), c.expected, c.title) for c in builtin_catalog()]
    widths = [max(len(r[i]) for r in rows + [("id", "kind", "dim", "expected", "")]) for i in range(4)]
    head = ("id", "kind", "dim", "expected", "title")
    for r in [head, *rows]:
        print("  ".join(r[i].ljust(widths[i]) for i in range(4)) + "  " + r[4])
    return EXIT_OK


def _resolve(target: str):
    path = Path(target)
    if path.is_file():
        return load(path)
    if target in catalog_by_id() or not path.suffix:
        try:
            return get_scenario(target)
        except KeyError:
            pass
    raise ConfigError(f"{target!r} is neither a catalog id nor a config file")


def _cmd_run(args) -> int:
    cfg = _resolve(args.target)
    out = Path(args.out) if args.out else default_out_dir()
    rep = run_scenario(cfg, out, svg=args.svg, sample_every=args.sample_every)
    print(f"{rep.id}: {rep.status} (expected {rep.expected}), {rep.wall_clock:.1f}s")
    if rep.error:
        print(f"  error: {rep.error}")
    for c in rep.checks:
        print(f"  {c.name:18s} {c.status}")
    for w in rep.warnings:
        print(f"  warning: {w}")
    print(f"  outputs in {out / rep.id}")
    return EXIT_OK if rep.as_expected else EXIT_FAIL


def _cmd_verify(args) -> int:
    configs = None
    if args.config:
        cat = catalog_by_id()
        for p in args.config:
            cfg = load(p)
            cat[cfg.id] = cfg
        configs = list(cat.values())
    summary = verify_all(
        args.filter, args.out, svg=args.svg, configs=configs, jobs=args.jobs
    )
    if not summary.reports:
        print(f"no scenario matches {args.filter!r}", file=sys.stderr)
        return EXIT_USAGE
    return summary.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="decaylab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="show the scenario catalog")

    r = sub.add_parser("run", help="run one scenario by id or config file")
    r.add_argument("target", help="catalog id (e.g. S4-gaussian-potential or S4) or config path")
    r.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./decaylab-out)")
    r.add_argument("--svg", action="store_true", help="also write SVG plots")
    r.add_argument("--sample-every", type=int, default=None, metavar="K")

    v = sub.add_parser("verify", help="run the catalog and check every expected verdict")
    v.add_argument("--filter", default=None, metavar="PATTERN", help="glob on scenario ids")
    v.add_argument("--out", default=None)
    v.add_argument("--svg", action="store_true")
    v.add_argument("--config", action="append", metavar="PATH", help="extra or replacement config")
    v.add_argument("--jobs", type=int, default=1, help="scenarios run in parallel processes")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            return _cmd_list(args)
        if args.command == "run":
            if args.sample_every is not None and args.sample_every < 1:
                raise ConfigError("--sample-every must be >= 1")
            return _cmd_run(args)
        return _cmd_verify(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
