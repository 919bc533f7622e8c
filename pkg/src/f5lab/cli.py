"""Command-line entry point: ``f5lab <command> [options]``.

Exit status is 0 on success, 2 for configuration or input errors and 3 when
some exact solve was censored by its budget.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from ._backend import BACKEND
from .experiments import ConfigError, ExperimentConfig, run
from .hypergraph import Hypergraph3
from .motifs import count_f5, count_k4minus, is_f5_free
from .solver import SolverBudgetExceeded, is_tripartite, max_f5_free, t_of_g

EXIT_OK, EXIT_CONFIG, EXIT_CENSORED = 0, 2, 3

COMMAND_KIND = {"sweep": "threshold_sweep", "census": "census", "audit": "audit", "bounds": "bounds"}
CENSUS_DEFAULTS = {"n": [200], "c": [0.05], "trials": 100}
AUDIT_DEFAULTS = {"n": [12], "c": [0.4], "trials": 5}


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="f5lab", description="Random Turan experiments for the generalized triangle.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    for name, help_ in (
        ("sweep", "threshold sweep: exact maxima vs tripartite optima"),
        ("census", "degree and codegree concentration census"),
        ("audit", "structural inequality audit on solved instances"),
        ("bounds", "union-bound margins and the constant system"),
    ):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", type=Path, help="JSON config file; flags override it")
        sp.add_argument("--n", type=_ints, help="comma-separated vertex counts")
        sp.add_argument("--c", type=_floats, help="comma-separated schedule coefficients")
        sp.add_argument("--schedule", choices=("constant", "sqrt_log", "log"))
        sp.add_argument("--trials", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--mode", choices=("exact", "greedy"))
        sp.add_argument("--budget", type=int, dest="node_budget", help="branch-and-bound node budget")
        sp.add_argument("--max-root-gap", type=int, dest="max_root_gap",
                        help="censor instances whose root bound exceeds the incumbent by more than this; -1 disables")
        sp.add_argument("--cap", type=int, help="maximum number of optima to enumerate")
        sp.add_argument("--out", type=str)
        sp.add_argument("--force", action="store_true", default=None)
        sp.add_argument("--workers", type=int)
        sp.add_argument("--timing", action="store_true", default=None, help="record wall time (breaks byte determinism)")
        sp.add_argument("--gnuplot", action="store_true", default=None)
        sp.add_argument("--fixture", choices=("turan", "empty"))

    sp = sub.add_parser("solve", help="maximum F5-free subhypergraph of a hypergraph file")
    sp.add_argument("file", type=Path)
    sp.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--enumerate", action="store_true")
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--out", type=Path)
    sp.add_argument("--force", action="store_true")

    sp = sub.add_parser("verify", help="F5-freeness and tripartiteness of a hypergraph file")
    sp.add_argument("file", type=Path)
    return ap


def _config(args) -> ExperimentConfig:
    overrides = {
        k: getattr(args, k)
        for k in (
            "n", "c", "schedule", "trials", "seed", "mode", "node_budget", "max_root_gap",
            "cap", "out", "force", "workers", "timing", "gnuplot", "fixture",
        )
    }
    if overrides["max_root_gap"] is not None and overrides["max_root_gap"] < 0:
        overrides["max_root_gap"] = None
        gap_off = True
    else:
        gap_off = False
    kind = COMMAND_KIND[args.command]
    base = {"kind": kind}
    if kind == "census":
        base.update(CENSUS_DEFAULTS)
    elif kind == "audit":
        base.update(AUDIT_DEFAULTS)
    if args.config is not None:
        try:
            d = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        if d.get("kind", kind) != kind:
            raise ConfigError(f"config kind {d['kind']!r} does not match command {args.command!r}")
        base.update(d)
    base.update({k: v for k, v in overrides.items() if v is not None})
    if gap_off:
        base["max_root_gap"] = None
    try:
        return ExperimentConfig.from_dict(base)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _read_hypergraph(path: Path) -> Hypergraph3:
    try:
        return Hypergraph3.from_text(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _cmd_experiment(args) -> int:
    cfg = _config(args)
    res = run(cfg)
    if cfg.kind == "threshold_sweep":
        for row in res.rows:
            print(json.dumps(row, separators=(",", ":")))
    elif cfg.kind == "bounds":
        print(json.dumps(res.rows[0], indent=2))
    else:
        print(f"{len(res.records)} records")
    if res.censored:
        logging.warning("%d trial(s) censored by the solver budget", res.censored)
        return EXIT_CENSORED
    return EXIT_OK


def _cmd_solve(args) -> int:
    g = _read_hypergraph(args.file)
    kw = {}
    if args.budget is not None:
        kw["node_budget"] = args.budget
    if args.cap is not None:
        kw["cap"] = args.cap
    try:
        r = max_f5_free(g, args.mode, enumerate_all=args.enumerate, **kw)
    except SolverBudgetExceeded as exc:
        inc = exc.incumbent
        print(json.dumps({"status": "censored", "reason": exc.reason, "nodes": exc.nodes,
                          "incumbent": len(inc) if inc is not None else None}))
        return EXIT_CENSORED
    out = {
        "status": "solved" if args.mode == "exact" else "greedy",
        "optimum": r.optimum,
        "nodes": r.nodes,
        "witness": [list(e) for e in r.witness.edges],
    }
    if r.all_optima is not None:
        out["n_optima"] = len(r.all_optima)
        out["truncated"] = r.truncated
        out["every_optimum_tripartite"] = all(bool(is_tripartite(h)) for h in r.all_optima)
    print(json.dumps(out, separators=(",", ":")))
    if args.out is not None:
        if args.out.exists() and not args.force:
            raise ConfigError(f"refusing to overwrite {args.out} (use --force)")
        args.out.write_text(r.witness.to_text())
    return EXIT_OK


def _cmd_verify(args) -> int:
    h = _read_hypergraph(args.file)
    free, wit = is_f5_free(h)
    cert = is_tripartite(h)
    out = {
        "n": h.n,
        "edges": len(h),
        "f5_free": free,
        "f5_witness": [list(e) for e in wit.edges] if wit else None,
        "f5_copies": count_f5(h),
        "k4minus": count_k4minus(h),
        "tripartite": bool(cert),
        "partition": list(cert.partition.assignment) if cert else None,
    }
    if h.n <= 15:
        out["t"] = t_of_g(h)[0]
    print(json.dumps(out, separators=(",", ":")))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    ap = _parser()
    args = ap.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_experiment(args)
    except ConfigError as exc:
        print(f"f5lab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
