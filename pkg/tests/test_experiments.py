import csv
import io
import json

import pytest

from f5lab.experiments import (
    CENSUS_FIELDS,
    ConfigError,
    ExperimentConfig,
    aggregate_sweep,
    balanced_partition,
    dump_jsonl,
    run,
    sweep_trial,
)
from f5lab.hypergraph import complete, turan
from f5lab.random_model import sample_g3

from oracles import brute_t, exhaustive_max_free


def cfg(**kw):
    return ExperimentConfig.from_dict(kw)


def test_config_validation():
    for bad in (
        {"trials": 0},
        {"n": [16]},
        {"n": []},
        {"c": [0.0]},
        {"kind": "plot"},
        {"mode": "fast"},
        {"schedule": "cubic"},
        {"fixture": "k5"},
        {"eps1": -1.0},
        {"nonsense": 1},
    ):
        with pytest.raises(ConfigError):
            cfg(**bad)
    assert cfg(kind="census", n=[200]).n == [200]


def test_config_load_with_overrides(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"kind": "threshold_sweep", "n": [6], "c": [0.5], "trials": 2}))
    c = ExperimentConfig.load(p, trials=3, seed=None)
    assert (c.n, c.trials, c.seed) == ([6], 3, 0)
    p.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        ExperimentConfig.load(p)


def test_nearly_empty_hosts_are_trivially_tripartite():
    res = run(cfg(n=[8], schedule="sqrt_log", c=[1e-300], trials=4))
    assert all(r["edges"] == 0 and r["every_optimum_tripartite"] for r in res.records)
    assert res.rows[0]["tripartite_fraction"] == 1.0


def test_complete_five_outcome_matches_exhaustive_search():
    res = run(cfg(n=[5], c=[1.0], trials=2))
    best, opt = exhaustive_max_free(complete(5).edges)
    want = all(brute_t(5, h) == len(h) for h in opt)
    for r in res.records:
        assert r["optimum"] == best and r["n_optima"] == len(opt)
        assert r["every_optimum_tripartite"] == want


def test_sweep_is_byte_deterministic(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"s{k}.jsonl"
        run(cfg(n=[7], c=[0.3, 0.6], trials=3, seed=5, out=str(out)))
        outs.append((out.read_bytes(), (tmp_path / f"s{k}.aggregates.csv").read_bytes()))
    assert outs[0] == outs[1]


def test_records_replay_from_their_seed():
    c = cfg(n=[7], c=[0.4], trials=3, seed=9)
    res = run(c)
    for r in res.records:
        again = sweep_trial((c, r["n"], r["c_index"], r["c"], r["p"], r["trial"]))
        assert again == r
        assert r["edges"] == len(sample_g3(r["n"], r["p"], r["seed"]))


def test_aggregate_fraction_is_mean_of_flags():
    res = run(cfg(n=[7, 8], c=[0.2, 0.5], trials=5, seed=1))
    for row in res.rows:
        rs = [r for r in res.records if r["n"] == row["n"] and r["c"] == row["c"] and r["status"] == "solved"]
        assert row["tripartite_fraction"] == sum(r["every_optimum_tripartite"] for r in rs) / len(rs)
        assert row["consistent"]
    assert aggregate_sweep(res.records) == res.rows


def test_refuses_to_overwrite(tmp_path):
    out = tmp_path / "a.jsonl"
    out.write_text("keep me\n")
    with pytest.raises(ConfigError):
        run(cfg(n=[6], c=[0.5], trials=1, out=str(out)))
    assert out.read_text() == "keep me\n"
    run(cfg(n=[6], c=[0.5], trials=1, out=str(out), force=True))
    assert out.read_text() != "keep me\n"


def test_censored_trials_are_recorded_not_raised():
    res = run(cfg(n=[10], c=[1.0], trials=2, max_root_gap=5))
    assert res.censored == 2
    assert all(r["status"] == "censored" and r["reason"] == "root_gap" for r in res.records)
    assert res.rows[0]["tripartite_fraction"] is None


def test_greedy_mode_records():
    res = run(cfg(n=[9], c=[0.5], trials=2, mode="greedy"))
    assert all(r["status"] == "greedy" and r["optimum"] <= r["edges"] for r in res.records)


def test_census_shape(tmp_path):
    out = tmp_path / "c.jsonl"
    res = run(cfg(kind="census", n=[40], c=[0.1], trials=4, out=str(out)))
    rows = list(csv.DictReader(io.StringIO((tmp_path / "c.csv").read_text())))
    assert len(rows) == 4 and list(rows[0]) == CENSUS_FIELDS
    assert len(out.read_text().splitlines()) == 4
    assert res.records[0]["codegree_cap"] > 0


def test_census_on_empty_fixture():
    res = run(cfg(kind="census", n=[30], c=[0.1], trials=1, fixture="empty"))
    r = res.records[0]
    assert r["min_degree"] == r["max_degree"] == r["max_codegree"] == r["edges"] == 0


def test_audit_fixtures():
    res = run(cfg(kind="audit", n=[6], c=[1.0], trials=1, fixture="turan"))
    (r,) = res.records
    line = next(x for x in r["lines"] if x["line_id"] == "missing_ge_3_inside_v1")
    assert (line["lhs"], line["rhs"], line["holds"]) == (0.0, 0.0, True)
    res = run(cfg(kind="audit", n=[6], c=[1.0], trials=1, fixture="empty"))
    (r,) = res.records
    # H is empty, so its first best partition puts every vertex in V1 and
    # every pair has an empty common link
    assert r["partition"] == [1] * 6 and r["sizes"]["Q"] == 15
    assert all(v == 0 for k, v in r["sizes"].items() if k != "Q")


def test_bounds_run(tmp_path):
    out = tmp_path / "b.csv"
    res = run(cfg(kind="bounds", bounds_n=[1e12], out=str(out)))
    assert res.rows[0]["constants_pass"]
    text = out.read_text()
    assert text.startswith("claim_id,n,C,s,r,i,ln_g,margin,holds,flags\n")
    assert "r_lt_1" in text or "i_lt_1" in text or "empty_range" in text


def test_balanced_partition_matches_turan_blocks():
    for n in range(3, 20):
        assert balanced_partition(n) == turan(n)[1]


def test_jsonl_is_compact():
    assert dump_jsonl([{"a": 1, "b": [1, 2]}]) == '{"a":1,"b":[1,2]}\n'


def test_workers_give_same_records():
    a = run(cfg(n=[7], c=[0.4], trials=4, seed=3)).records
    b = run(cfg(n=[7], c=[0.4], trials=4, seed=3, workers=2)).records
    assert a == b
