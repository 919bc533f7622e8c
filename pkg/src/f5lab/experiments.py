"""Seeded experiment campaigns and their on-disk records.

Every trial draws its hypergraph from ``derive_seed(master, n, c_index,
trial)``, so any single record can be replayed on its own.  Records are
collected, sorted by ``(n, c_index, trial)`` and written in one go, which keeps
the output byte-identical whatever the number of workers.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .analysis import audit_propositions, concentration_census, codegree_cap, heavy_pair_cap
from .bounds import CLAIMS, Constants, check_constants, check_grid, min_passing_c, to_csv
from .hypergraph import Hypergraph3, Partition3, crossing_edges, turan, turan_sizes
from .random_model import KINDS, PSchedule, derive_seed, sample_g3, schedule_p
from .solver import (
    DEFAULT_CAP,
    DEFAULT_NODE_BUDGET,
    SolverBudgetExceeded,
    best_partition_for,
    is_tripartite,
    max_f5_free,
    t_of_g,
    verify_max_and_tripartite,
)

log = logging.getLogger(__name__)

EXPERIMENT_KINDS = ("threshold_sweep", "census", "audit", "bounds")
EXACT_MAX_N = 15
DEFAULT_MAX_ROOT_GAP = 30


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    kind: str = "threshold_sweep"
    n: list[int] = field(default_factory=lambda: [10, 12])
    schedule: str = "constant"
    c: list[float] = field(default_factory=lambda: [0.05, 0.15, 0.3, 0.6, 1.0])
    trials: int = 20
    seed: int = 0
    mode: str = "exact"
    node_budget: int = DEFAULT_NODE_BUDGET
    max_root_gap: int | None = DEFAULT_MAX_ROOT_GAP
    cap: int = DEFAULT_CAP
    out: str | None = None
    force: bool = False
    workers: int = 1
    timing: bool = False
    gnuplot: bool = False
    fixture: str | None = None
    census_s: int | None = None
    delta: float = 1e-100
    eps1: float = 1 / 3000
    eps2: float = 1 / 400
    eps3: float = 1e-10
    bounds_n: list[float] = field(default_factory=lambda: [1e6, 1e9, 1e12])
    bounds_c: float = 1e4

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        names = {f.name for f in dataclasses.fields(cls)}
        bad = sorted(set(d) - names)
        if bad:
            raise ConfigError(f"unknown config keys: {', '.join(bad)}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path, **overrides) -> ExperimentConfig:
        try:
            d = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        d.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(d)

    @property
    def consts(self) -> Constants:
        return Constants(self.delta, self.eps1, self.eps2, self.eps3, self.bounds_c)

    def validate(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"kind must be one of {EXPERIMENT_KINDS}")
        if self.schedule not in KINDS:
            raise ConfigError(f"schedule must be one of {KINDS}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError("trials must be a positive integer")
        if self.mode not in ("exact", "greedy"):
            raise ConfigError("mode must be exact or greedy")
        if not self.n or any(not isinstance(k, int) or k < 2 for k in self.n):
            raise ConfigError("n must be a non-empty list of integers >= 2")
        if not self.c or any(not (isinstance(x, (int, float)) and x > 0) for x in self.c):
            raise ConfigError("c must be a non-empty list of positive numbers")
        if self.kind in ("threshold_sweep", "audit") and max(self.n) > EXACT_MAX_N:
            raise ConfigError(f"{self.kind} solves exactly and needs n <= {EXACT_MAX_N}")
        if self.node_budget < 1 or self.cap < 1 or self.workers < 1:
            raise ConfigError("node_budget, cap and workers must be positive")
        if self.fixture not in (None, "turan", "empty"):
            raise ConfigError("fixture must be turan or empty")
        try:
            self.consts
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# output


def dump_jsonl(records: list[dict]) -> str:
    return "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in records)


def dump_csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(r.get(k)) for k in fields})
    return buf.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def companion(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


def write_outputs(files: dict[Path, str], force: bool) -> None:
    """Create every file, refusing to touch existing ones unless ``force``."""
    if not force:
        clash = [str(p) for p in files if p.exists()]
        if clash:
            raise ConfigError(f"refusing to overwrite {', '.join(clash)} (use --force)")
    for path, text in files.items():
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w" if force else "x", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# trials


def _points(cfg: ExperimentConfig):
    for n in sorted(cfg.n):
        for ci, c in enumerate(cfg.c):
            p = schedule_p(PSchedule(cfg.schedule, c), n)
            for trial in range(cfg.trials):
                yield n, ci, c, p, trial


def _base(cfg: ExperimentConfig, kind: str, n: int, ci: int, c: float, p: float, trial: int) -> dict:
    return {
        "kind": kind,
        "n": n,
        "c": c,
        "c_index": ci,
        "p": p,
        "trial": trial,
        "master_seed": cfg.seed,
        "seed": derive_seed(cfg.seed, n, ci, trial),
    }


def _host(cfg: ExperimentConfig, n: int, p: float, seed: int) -> Hypergraph3:
    if cfg.fixture == "turan":
        return turan(n)[0]
    if cfg.fixture == "empty":
        return Hypergraph3(n)
    return sample_g3(n, p, seed)


def solve_host(g: Hypergraph3, cfg: ExperimentConfig) -> dict:
    """Outcome fields of one sweep trial for the host ``g``."""
    t, pi = t_of_g(g)
    out: dict[str, Any] = {"edges": len(g), "t": t}
    if cfg.mode == "greedy":
        r = max_f5_free(g, "greedy")
        out.update(status="greedy", optimum=r.optimum, witness_tripartite=bool(is_tripartite(r.witness)))
        return out
    try:
        r = max_f5_free(
            g,
            "exact",
            enumerate_all=True,
            cap=cfg.cap,
            node_budget=cfg.node_budget,
            initial=crossing_edges(g, pi),
            max_root_gap=cfg.max_root_gap,
        )
    except SolverBudgetExceeded as exc:
        out.update(
            status="censored",
            reason=exc.reason,
            incumbent=len(exc.incumbent) if exc.incumbent is not None else None,
            nodes=exc.nodes,
            optimum=None,
            n_optima=None,
            every_optimum_tripartite=None,
        )
        return out
    chk = verify_max_and_tripartite(g, r, t)
    out.update(
        status="solved",
        optimum=r.optimum,
        n_optima=len(r.all_optima),
        truncated=r.truncated,
        optimum_ge_t=chk.optimum_ge_t,
        all_optima_free=chk.all_free,
        tripartite_optima=sum(chk.tripartite_flags),
        every_optimum_tripartite=chk.every_optimum_tripartite,
        nodes=r.nodes,
        root_bound=r.root_bound,
    )
    return out


def sweep_trial(args) -> dict:
    cfg, n, ci, c, p, trial = args
    rec = _base(cfg, "threshold_sweep", n, ci, c, p, trial)
    t0 = time.perf_counter()
    rec.update(solve_host(_host(cfg, n, p, rec["seed"]), cfg))
    if cfg.timing:
        rec["seconds"] = time.perf_counter() - t0
    return rec


def balanced_partition(n: int) -> Partition3:
    """Consecutive blocks with the sizes of the balanced complete tripartite hypergraph."""
    sizes = turan_sizes(n)
    return Partition3(tuple(i + 1 for i in range(3) for _ in range(sizes[i])))


def census_trial(args) -> dict:
    cfg, n, ci, c, p, trial = args
    rec = _base(cfg, "census", n, ci, c, p, trial)
    t0 = time.perf_counter()
    g = _host(cfg, n, p, rec["seed"])
    s_size = cfg.census_s if cfg.census_s is not None else n // 3
    cen = concentration_census(g, p, pi=balanced_partition(n), s=range(s_size))
    cen.pop("n")
    cen.pop("p")
    rec.update(cen)
    rec["codegree_cap"] = codegree_cap(p, n) if n >= 3 else None
    rec["heavy_pair_cap"] = heavy_pair_cap(n)
    if cfg.timing:
        rec["seconds"] = time.perf_counter() - t0
    return rec


def audit_trial(args) -> dict:
    cfg, n, ci, c, p, trial = args
    rec = _base(cfg, "audit", n, ci, c, p, trial)
    t0 = time.perf_counter()
    g = _host(cfg, n, p, rec["seed"])
    t, pi_g = t_of_g(g)
    try:
        r = max_f5_free(
            g, "exact", node_budget=cfg.node_budget, initial=crossing_edges(g, pi_g), max_root_gap=cfg.max_root_gap
        )
    except SolverBudgetExceeded as exc:
        rec.update(status="censored", reason=exc.reason, nodes=exc.nodes, t=t)
        return rec
    h = r.witness
    pi = best_partition_for(h)
    rep = audit_propositions(g, h, pi, cfg.consts, p, t_value=t, pi_maximizes=True, h_is_maximum=True)
    rec.update(status="solved", partition=list(pi.assignment), regime=rep.regime, sizes=rep.sizes)
    rec["lines"] = [dataclasses.asdict(x) for x in rep.lines]
    if cfg.timing:
        rec["seconds"] = time.perf_counter() - t0
    return rec


def _run(cfg: ExperimentConfig, fn: Callable[[tuple], dict]) -> list[dict]:
    work = [(cfg, *pt) for pt in _points(cfg)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            recs = list(ex.map(fn, work, chunksize=4))
    else:
        recs = []
        cache: dict[int, dict] = {}
        for w in work:
            recs.append(_cached(fn, w, cache))
    recs.sort(key=lambda r: (r["n"], r["c_index"], r["trial"]))
    return recs


def _cached(fn, w, cache):
    """Reuse outcomes for hosts already seen (for instance every trial at p = 1)."""
    cfg, n, ci, c, p, trial = w
    if fn is not sweep_trial or cfg.timing:
        return fn(w)
    rec = _base(cfg, "threshold_sweep", n, ci, c, p, trial)
    g = _host(cfg, n, p, rec["seed"])
    key = (n, hash(g.edges))
    hit = cache.get(key)
    if hit is None or hit["graph"] != g:
        hit = {"graph": g, "out": solve_host(g, cfg)}
        cache[key] = hit
    rec.update(hit["out"])
    return rec


# ---------------------------------------------------------------------------
# campaigns

AGG_FIELDS = [
    "n",
    "c",
    "p",
    "trials",
    "solved",
    "censored",
    "tripartite_fraction",
    "mean_optimum",
    "mean_t",
    "consistent",
]


def aggregate_sweep(records: list[dict]) -> list[dict]:
    """Per ``(n, c)`` summary; fractions are means over solved trials."""
    rows = []
    groups: dict[tuple, list[dict]] = {}
    for r in records:
        groups.setdefault((r["n"], r["c_index"]), []).append(r)
    for (n, _), rs in sorted(groups.items()):
        solved = [r for r in rs if r["status"] == "solved"]
        flags = [r["every_optimum_tripartite"] for r in solved]
        rows.append(
            {
                "n": n,
                "c": rs[0]["c"],
                "p": rs[0]["p"],
                "trials": len(rs),
                "solved": len(solved),
                "censored": sum(r["status"] == "censored" for r in rs),
                "tripartite_fraction": (sum(flags) / len(flags)) if flags else None,
                "mean_optimum": (sum(r["optimum"] for r in solved) / len(solved)) if solved else None,
                "mean_t": sum(r["t"] for r in rs) / len(rs),
                "consistent": all(sweep_consistent(r) for r in solved),
            }
        )
    return rows


def sweep_consistent(r: dict) -> bool:
    """Internal checks on one solved trial."""
    return (
        r["optimum"] >= r["t"]
        and r["optimum_ge_t"]
        and r["all_optima_free"]
        and r["every_optimum_tripartite"] == (r["tripartite_optima"] == r["n_optima"])
    )


def gnuplot_script(data_csv: Path) -> str:
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        "set xlabel 'p'\n"
        "set ylabel 'fraction with every optimum tripartite'\n"
        f"plot '{data_csv.name}' using 3:7 with linespoints\n"
    )


@dataclass
class RunResult:
    records: list[dict]
    rows: list[dict]
    files: dict[Path, str]
    censored: int = 0


def run_threshold_sweep(cfg: ExperimentConfig) -> RunResult:
    recs = _run(cfg, sweep_trial)
    rows = aggregate_sweep(recs)
    files = {}
    if cfg.out:
        out = Path(cfg.out)
        agg = companion(out, ".aggregates.csv")
        files[out] = dump_jsonl(recs)
        files[agg] = dump_csv(rows, AGG_FIELDS)
        if cfg.gnuplot:
            files[companion(out, ".gp")] = gnuplot_script(agg)
    return RunResult(recs, rows, files, sum(r["status"] == "censored" for r in recs))


CENSUS_FIELDS = [
    "n",
    "c",
    "p",
    "trial",
    "seed",
    "edges",
    "min_degree",
    "max_degree",
    "expected_degree",
    "degrees_within_tolerance",
    "crossing_ratio_min",
    "crossing_ratio_max",
    "max_codegree",
    "codegree_cap",
    "codegree_within_cap",
    "heavy_pairs",
    "heavy_pair_cap",
]


def run_census(cfg: ExperimentConfig) -> RunResult:
    recs = _run(cfg, census_trial)
    files = {}
    if cfg.out:
        out = Path(cfg.out)
        files[out] = dump_jsonl(recs)
        files[companion(out, ".csv")] = dump_csv(recs, CENSUS_FIELDS)
    return RunResult(recs, recs, files)


def run_audit(cfg: ExperimentConfig) -> RunResult:
    recs = _run(cfg, audit_trial)
    files = {Path(cfg.out): dump_jsonl(recs)} if cfg.out else {}
    return RunResult(recs, [], files, sum(r["status"] == "censored" for r in recs))


def run_bounds(cfg: ExperimentConfig) -> RunResult:
    consts = cfg.consts
    crep = check_constants(consts)
    reps = check_grid(cfg.bounds_n, cfg.bounds_c, consts)
    minimal = {cid: min_passing_c(cid, cfg.bounds_n, consts) for cid in CLAIMS}
    text = to_csv(reps, crep)
    files = {Path(cfg.out): text} if cfg.out else {}
    summary = {
        "constants_pass": crep.all_pass,
        "claims": {
            cid: {
                "points": sum(r.claim_id == cid for r in reps),
                "non_degenerate": sum(r.claim_id == cid and not r.degenerate for r in reps),
                "failing": sum(r.claim_id == cid and not r.degenerate and not r.holds for r in reps),
                "min_passing_c": minimal[cid],
            }
            for cid in CLAIMS
        },
    }
    return RunResult(reps, [summary], files)


RUNNERS = {
    "threshold_sweep": run_threshold_sweep,
    "census": run_census,
    "audit": run_audit,
    "bounds": run_bounds,
}


def run(cfg: ExperimentConfig) -> RunResult:
    cfg.validate()
    res = RUNNERS[cfg.kind](cfg)
    if res.files:
        write_outputs(res.files, cfg.force)
    return res
