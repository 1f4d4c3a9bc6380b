"""Command-line front end: ``eve-sim run | netstats | sweep | recipe``.

Exit codes: 0 success, 1 runtime failure, 2 invalid input (config, arguments,
edge-list file, unknown recipe or sweep parameter). Errors print one line
starting with ``eve-sim: error:``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from eve_sim import recipes
from eve_sim.config import ConfigError, SimConfig, load_config, sweepable_keys, with_overrides
from eve_sim.engine import SimulationError, simulate
from eve_sim.metrics import CSV_COLUMNS, topology_stats
from eve_sim.network import EdgeListError, parse_edge_list
from eve_sim.outputs import dump_json, report_csv, write_run

log = logging.getLogger("eve_sim")

EXIT_OK, EXIT_RUNTIME, EXIT_INPUT = 0, 1, 2


def _fail(code: int, reason: str) -> int:
    print(f"eve-sim: error: {reason}", file=sys.stderr)
    return code


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("EVE_SIM_THREADS", "1")))
    except ValueError:
        return 1


def _load(path: str, seed: int | None) -> SimConfig:
    cfg = load_config(path)
    if seed is not None:
        cfg = with_overrides(cfg, seed=seed)
    return cfg


def cmd_run(args) -> int:
    try:
        cfg = _load(args.config, args.seed)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"config: {exc}")
    except ConfigError as exc:
        return _fail(EXIT_INPUT, f"config: {'; '.join(exc.problems)}")
    out = Path(args.out)
    try:
        reports, state = simulate(cfg, threads=args.threads)
    except SimulationError as exc:
        write_run(out, cfg, exc.reports, None)
        return _fail(EXIT_RUNTIME, f"run: {exc}")
    write_run(out, cfg, reports, state)
    log.info("wrote %d reports to %s", len(reports), out)
    return EXIT_OK


def cmd_netstats(args) -> int:
    try:
        text = Path(args.edges).read_text()
    except OSError as exc:
        return _fail(EXIT_INPUT, f"edges: {exc}")
    try:
        net = parse_edge_list(text)
    except EdgeListError as exc:
        return _fail(EXIT_INPUT, f"edges: {exc}")
    if args.tau < 0:
        return _fail(EXIT_INPUT, f"tau: must be >= 0, got {args.tau}")
    cc, pl, ncomp = topology_stats(net, args.tau)
    print(json.dumps({
        "nodes": net.n,
        "edges_kept": len(net.thresholded(args.tau).weights),
        "clustering": cc,
        "path_length": pl if pl is not None else "disconnected",
        "components": ncomp,
        "tau": args.tau,
    }, sort_keys=True))
    return EXIT_OK


def _parse_values(raw: str, kind: type) -> list:
    out = []
    for tok in raw.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if kind is int:
            try:
                out.append(int(tok))
            except ValueError:
                raise ValueError(f"{tok!r} is not an integer") from None
        else:
            out.append(float(tok))
    if not out:
        raise ValueError("empty values list")
    return out


def cmd_sweep(args) -> int:
    keys = sweepable_keys()
    if args.param not in keys:
        return _fail(EXIT_INPUT, f"param: unknown sweep parameter {args.param!r} "
                                 f"(choose from {', '.join(sorted(keys))})")
    try:
        values = _parse_values(args.values, keys[args.param])
    except ValueError as exc:
        return _fail(EXIT_INPUT, f"values: {exc}")
    if args.seeds < 1:
        return _fail(EXIT_INPUT, f"seeds: must be >= 1, got {args.seeds}")
    try:
        base = load_config(args.config)
        runs = [(v, base.seed + s, with_overrides(base, **{args.param: v, "seed": base.seed + s}))
                for v in values for s in range(args.seeds)]
    except OSError as exc:
        return _fail(EXIT_INPUT, f"config: {exc}")
    except ConfigError as exc:
        return _fail(EXIT_INPUT, f"config: {'; '.join(exc.problems)}")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for idx, (value, seed, cfg) in enumerate(runs):
        run_dir = out / "runs" / f"{idx:03d}_{args.param}={value}_seed={seed}"
        try:
            reports, state = simulate(cfg, threads=args.threads)
        except SimulationError as exc:
            return _fail(EXIT_RUNTIME, f"run {idx}: {exc}")
        write_run(run_dir, cfg, reports, None)
        rows.append({"run": idx, "param": args.param, "value": value, "seed": seed,
                     **reports[-1].row()})
    cols = ("run", "param", "value", "seed") + CSV_COLUMNS
    (out / "sweep.csv").write_text(report_csv(rows, cols))
    return EXIT_OK


def cmd_recipe(args) -> int:
    if args.name not in recipes.RECIPES:
        return _fail(EXIT_INPUT, f"recipe: unknown recipe {args.name!r} "
                                 f"(known: {', '.join(recipes.RECIPES)})")
    kwargs = {}
    if args.seeds is not None:
        if args.name == "feedback":
            return _fail(EXIT_INPUT, "seeds: the feedback recipe runs a single seed")
        kwargs["seeds"] = args.seeds
    verdict = recipes.RECIPES[args.name](**kwargs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{args.name}.json").write_text(dump_json(verdict))
    print(f"{args.name}: {'PASS' if verdict['pass'] else 'FAIL'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eve-sim", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one simulation and write its outputs")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("netstats", help="topology statistics of an edge-list file")
    p.add_argument("--edges", required=True)
    p.add_argument("--tau", type=float, default=0.0)
    p.set_defaults(func=cmd_netstats)

    p = sub.add_parser("sweep", help="run a parameter sweep over values x seeds")
    p.add_argument("--config", required=True)
    p.add_argument("--param", required=True)
    p.add_argument("--values", required=True, help="comma-separated list")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("recipe", help="run a canned experiment and write its verdict")
    p.add_argument("name")
    p.add_argument("--out", required=True)
    p.add_argument("--seeds", type=int)
    p.set_defaults(func=cmd_recipe)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "threads", 1) < 1:
        return _fail(EXIT_INPUT, f"threads: must be >= 1, got {args.threads}")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
