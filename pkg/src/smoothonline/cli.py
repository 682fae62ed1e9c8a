"""Command line: ``simulate`` one game, ``verify`` a suite, emit a sweep ``table``.

Exit status: 0 success, 1 an expectation failed, 2 usage error.
Settings resolve as command-line flag, then ``--config`` JSON file, then defaults.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from .adversaries import ADVERSARIES
from .engine import GameConfig, ProtocolViolation, run_game
from .experiments.registry import (ResultRow, build_adversary, build_learner, build_scenario, known_component,
                                   row_dict, run_suite, suite)
from .experiments.tables import TABLES, make_table
from .learners import LEARNERS

OUTPUT_ENV = "SMOOTHONLINE_OUTPUT_DIR"
DEFAULTS = {"scenario": "base", "radius": 1.0, "weight": None, "p": 2.0, "q": 2.0, "dim": 1,
            "horizon": 10000, "seed": 0, "jobs": 1, "out": None, "format": "csv"}


class UsageError(Exception):
    pass


def _common(parser: argparse.ArgumentParser):
    g = parser.add_argument_group("game settings")
    g.add_argument("--config", help="JSON file with default settings")
    g.add_argument("--scenario", choices=["base", "s1", "s2", "s3"])
    g.add_argument("--radius", type=float)
    g.add_argument("--weight", help="id | exp:c=<v> | indicator | one | invlog2 | custom:<file>")
    g.add_argument("--p", type=float)
    g.add_argument("--q", type=float)
    g.add_argument("--dim", type=int)
    g.add_argument("--horizon", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--jobs", type=int)
    g.add_argument("--out", help="output path (default: stdout, or $%s/<name>)" % OUTPUT_ENV)
    g.add_argument("--format", choices=["csv", "json"])
    g.add_argument("--no-timestamp", action="store_true", help="omit time-dependent output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="smoothonline", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one game and write its transcript")
    sim.add_argument("--learner", required=True, help=f"one of {sorted(LEARNERS)}, optionally name:k=v,...")
    sim.add_argument("--adversary", required=True, help=f"one of {sorted(ADVERSARIES)}, optionally name:k=v,...")
    _common(sim)

    ver = sub.add_parser("verify", help="run a registered suite and report pass/fail rows")
    ver.add_argument("suite", help="sharp_constants | divergence | scaling_law | separations | weights | multivariable | all")
    _common(ver)

    tab = sub.add_parser("table", help="sweep one experiment over a grid and emit CSV")
    tab.add_argument("name", help=f"one of {sorted(TABLES)}")
    tab.add_argument("--grid", help="comma-separated parameter values (empty for a header-only table)")
    tab.add_argument("--param", action="append", default=[], help="extra table parameter key=value")
    tab.add_argument("--figure", help="also render a PNG to this path")
    _common(tab)
    return ap


def resolve(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    if args.config:
        try:
            settings.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    return settings


def _out_path(settings: dict, default_name: str) -> Path | None:
    if settings["out"]:
        return Path(settings["out"])
    env = os.environ.get(OUTPUT_ENV)
    if env:
        Path(env).mkdir(parents=True, exist_ok=True)
        return Path(env) / default_name
    return None


def _emit(text: str, path: Path | None):
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def _header(lines, stamp: bool) -> str:
    out = "".join(f"# {line}\n" for line in lines)
    if stamp:
        out += f"# generated {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n"
    return out


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def cmd_simulate(args, settings) -> int:
    for text, reg, kind in ((args.learner, LEARNERS, "learner"), (args.adversary, ADVERSARIES, "adversary")):
        if not known_component(text, reg):
            raise UsageError(f"unknown {kind} {text!r}; choose from {sorted(reg)}")
    try:
        scenario = build_scenario(settings["scenario"], settings["radius"], settings["weight"])
        cfg = GameConfig(settings["p"], settings["q"], scenario, settings["horizon"], settings["dim"], settings["seed"])
        learner, adversary = build_learner(args.learner), build_adversary(args.adversary)
        tr = run_game(cfg, learner, adversary)
    except ProtocolViolation as exc:
        print(f"protocol violation: {exc}", file=sys.stderr)
        return 1
    except (TypeError, ValueError, KeyError) as exc:
        raise UsageError(str(exc))
    path = _out_path(settings, "transcript.jsonl")
    _emit(tr.to_jsonl(), path)
    summary = tr.summary_csv()
    cert = adversary.certificate()
    (sys.stdout if path is not None else sys.stderr).write(summary)
    print(f"# certificate: {'ok' if cert.ok else 'FAILED'} {json.dumps(cert.detail, default=str)}", file=sys.stderr)
    return 0 if cert.ok else 1


def cmd_verify(args, settings) -> int:
    try:
        specs = suite(args.suite)
    except KeyError as exc:
        raise UsageError(str(exc.args[0]))
    rows: list[ResultRow] = run_suite(specs, jobs=settings["jobs"], timestamps=not args.no_timestamp)
    path = _out_path(settings, f"verify_{args.suite}.{settings['format']}")
    if settings["format"] == "json":
        text = "".join(json.dumps(row_dict(r)) + "\n" for r in rows)
    else:
        text = _header([f"smoothonline verify {args.suite}", "columns: " + ", ".join(ResultRow.FIELDS),
                        "passed: measured respects the bound (lower/upper: additive tolerance, "
                        "equals: relative) and the adversary certificate holds"],
                       not args.no_timestamp) + _csv(ResultRow.FIELDS, [row_dict(r) for r in rows])
    _emit(text, path)
    failed = [r.experiment for r in rows if not r.passed]
    print(f"{len(rows) - len(failed)}/{len(rows)} passed" + (f"; failed: {', '.join(failed)}" if failed else ""),
          file=sys.stderr)
    return 1 if failed else 0


def _grid(text: str | None):
    if text is None:
        return None
    return [float(v) for v in text.split(",") if v.strip()]


def cmd_table(args, settings) -> int:
    if args.name not in TABLES:
        raise UsageError(f"unknown table {args.name!r}; choose from {sorted(TABLES)}")
    params = {}
    for item in args.param:
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"bad --param {item!r}")
        params[key] = json.loads(val)
    try:
        table = make_table(args.name, _grid(args.grid), **params)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))
    path = _out_path(settings, f"{args.name}.{settings['format']}")
    if settings["format"] == "json":
        text = "".join(json.dumps(r) + "\n" for r in table.rows)
    else:
        text = _header([f"smoothonline table {args.name}", "columns: " + ", ".join(table.columns), *table.notes],
                       not args.no_timestamp) + _csv(table.columns, table.rows)
    _emit(text, path)
    if args.figure:
        from .experiments.plotting import plot_table
        plot_table(table, args.figure)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve(args)
        return {"simulate": cmd_simulate, "verify": cmd_verify, "table": cmd_table}[args.command](args, settings)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"smoothonline: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
