"""Command-line entry point: ``mapswarm run|sweep|compare|render``.

Exit status is 0 on success, 1 for configuration problems and 2 when a
simulation fails at run time. ``MAPSWARM_SEED`` overrides the seed given in
the config file.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

import yaml

from .model import ConfigError, ScenarioConfig, load_config
from .render import pick_snapshot, render_svg
from .runner import METHODS, compare, metrics_csv, output_json, run, sweep

SEED_ENV = "MAPSWARM_SEED"
EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

log = logging.getLogger("mapswarm")


def _config(path: str) -> ScenarioConfig:
    try:
        cfg = load_config(path)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path} is not valid YAML: {exc}") from exc
    seed = os.environ.get(SEED_ENV)
    if seed:
        try:
            cfg = cfg.replace(seed=int(seed))
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {seed!r}") from exc
    return cfg


def _number(token: str):
    token = token.strip()
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError as exc:
        raise ConfigError(f"not a number: {token!r}") from exc


def _number_list(text: str) -> list:
    values = [_number(t) for t in text.split(",") if t.strip()]
    if not values:
        raise ConfigError("empty value list")
    return values


def _write_rows(rows, header, dest):
    if dest is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return
    with open(dest, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def cmd_run(args) -> int:
    cfg = _config(args.config)
    out = run(cfg, trace=args.trace)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "metrics.csv").write_text(metrics_csv(out.records))
    (outdir / "run.json").write_text(output_json(out))
    if out.trace is not None:
        (outdir / "trace.txt").write_text("".join(f"{k} {stage}\n" for k, stage in out.trace))
    last = out.records[-1]
    print(f"t={last.t:g}s coverage={last.coverage:.4f} fiedler={last.fiedler:.4g} "
          f"info_penetration={last.info_penetration:.4f} alive_maps={last.alive_maps} -> {outdir}")
    for reports in out.recovery:
        print("recovery: " + ", ".join(
            f"{r.metric}={'n/a' if r.ratio is None else format(r.ratio, '.3f')}" for r in reports))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args.config)
    values = _number_list(args.values)
    res = sweep(cfg, args.vary, values)
    rows = [[v, r.coverage, r.fiedler, r.info_penetration, r.alive_maps] for v, r in res]
    _write_rows(rows, [args.vary, "coverage", "fiedler", "info_penetration", "alive_maps"], args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _config(args.config)
    counts = _number_list(args.maps)
    methods = tuple(m.strip() for m in args.methods.split(","))
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise ConfigError(f"unknown method(s) {sorted(unknown)}; choose from {list(METHODS)}")
    res = compare(cfg, counts, methods, restarts=args.restarts)
    rows = [[m, n, r.coverage, r.fiedler, r.info_penetration] for m in methods for n, r in res[m]]
    _write_rows(rows, ["method", "L", "coverage", "fiedler", "info_penetration"], args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    path = Path(args.run_output)
    if path.is_dir():
        path = path / "run.json"
    try:
        doc = json.loads(path.read_text())
        cfg = ScenarioConfig.from_dict(doc["config"])
        snap = pick_snapshot(doc["snapshots"], args.at)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path} is not a run output document") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    svg = render_svg(snap, cfg)
    dest = Path(args.output) if args.output else path.with_name(f"snapshot_t{snap['t']:.2f}.svg")
    dest.write_text(svg)
    print(f"snapshot t={snap['t']:g}s -> {dest}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mapswarm", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="simulate one scenario")
    r.add_argument("config")
    r.add_argument("-o", "--output", default="run_output", help="output directory (default: run_output)")
    r.add_argument("--trace", action="store_true", help="also write the per-step stage sequence")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="vary one parameter, report final-window means")
    s.add_argument("config")
    s.add_argument("--vary", required=True, help="L, s, K or failure_fraction")
    s.add_argument("--values", required=True, help="comma separated, e.g. 10,20,30")
    s.add_argument("-o", "--output", help="CSV file (default: stdout)")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("compare", help="dynamic placement against the static baselines")
    c.add_argument("config")
    c.add_argument("--maps", default=",".join(str(n) for n in range(10, 101, 10)),
                   help="MAP counts to try (default: 10,20,...,100)")
    c.add_argument("--methods", default=",".join(METHODS))
    c.add_argument("--restarts", type=int, default=10, help="p-median restarts")
    c.add_argument("-o", "--output", help="CSV file (default: stdout)")
    c.set_defaults(func=cmd_compare)

    v = sub.add_parser("render", help="SVG top view of a stored snapshot")
    v.add_argument("run_output", help="run.json or the directory holding it")
    v.add_argument("--at", type=float, required=True, help="time in seconds; nearest snapshot is used")
    v.add_argument("-o", "--output", help="SVG file")
    v.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - every other failure is a runtime error
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
