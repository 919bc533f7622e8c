import json

from f5lab.cli import main
from f5lab.hypergraph import F5, turan


def test_bounds_exit_zero_and_refuses_overwrite(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bounds", "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["constants_pass"]
    assert main(["bounds", "--out", str(out)]) == 2
    assert "refusing to overwrite" in capsys.readouterr().err
    assert main(["bounds", "--out", str(out), "--force"]) == 0


def test_config_errors_exit_two(tmp_path, capsys):
    assert main(["sweep", "--n", "20"]) == 2
    assert main(["sweep", "--trials", "0"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["sweep", "--config", str(bad)]) == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"kind": "census"}))
    assert main(["sweep", "--config", str(wrong)]) == 2
    assert main(["verify", str(tmp_path / "missing.txt")]) == 2


def test_censored_sweep_exits_three(capsys):
    assert main(["sweep", "--n", "10", "--c", "1.0", "--trials", "1", "--max-root-gap", "5"]) == 3


def test_config_file_with_flag_overrides(tmp_path, capsys):
    conf = tmp_path / "s.json"
    conf.write_text(json.dumps({"n": [6], "c": [0.5], "trials": 5, "seed": 1}))
    out = tmp_path / "s.jsonl"
    assert main(["sweep", "--config", str(conf), "--trials", "2", "--out", str(out)]) == 0
    recs = [json.loads(x) for x in out.read_text().splitlines()]
    assert len(recs) == 2 and all(r["master_seed"] == 1 for r in recs)


def test_sweep_cli_is_deterministic(tmp_path, capsys):
    blobs = []
    for k in range(2):
        out = tmp_path / f"r{k}.jsonl"
        assert main(["sweep", "--n", "7", "--c", "0.3,0.6", "--trials", "3", "--seed", "4", "--out", str(out)]) == 0
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]


def test_gnuplot_companion(tmp_path, capsys):
    out = tmp_path / "g.jsonl"
    assert main(["sweep", "--n", "6", "--c", "0.5", "--trials", "1", "--out", str(out), "--gnuplot"]) == 0
    assert "g.aggregates.csv" in (tmp_path / "g.gp").read_text()


def test_solve_and_verify(tmp_path, capsys):
    f = tmp_path / "f5.txt"
    f.write_text(F5.to_text())
    assert main(["solve", str(f), "--enumerate"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["optimum"] == 2 and out["n_optima"] == 3 and out["every_optimum_tripartite"]

    assert main(["verify", str(f)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert not out["f5_free"] and not out["tripartite"] and out["t"] == 2

    s = tmp_path / "s.txt"
    s.write_text(turan(7)[0].to_text())
    assert main(["verify", str(s)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["f5_free"] and out["tripartite"] and out["k4minus"] == 0

    wit = tmp_path / "w.txt"
    assert main(["solve", str(f), "--out", str(wit)]) == 0
    assert main(["solve", str(f), "--out", str(wit)]) == 2


def test_solve_budget_censoring(tmp_path, capsys):
    from f5lab.random_model import sample_g3

    f = tmp_path / "g.txt"
    f.write_text(sample_g3(10, 0.6, 5).to_text())
    assert main(["solve", str(f), "--budget", "10"]) == 3
    assert json.loads(capsys.readouterr().out)["status"] == "censored"


def test_malformed_hypergraph_file(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("5 1\n0 1 9\n")
    assert main(["verify", str(f)]) == 2
