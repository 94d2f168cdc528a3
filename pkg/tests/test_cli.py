"""Command-line surface: exit codes, file outputs, manifests, determinism."""

import json
import math

import pytest

from spectop.cli import ExperimentConfig, config_hash, fmt, main, trial_seed
from spectop.graphs import GraphError, read_graph


def run(argv):
    return main(argv)


# ---------------------------------------------------------------------------
# exit codes


def test_gen_exit0(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(["gen", "--family", "cycle", "--n", "12", "--out", "g.graph"]) == 0
    g = read_graph("g.graph")
    assert g.n == 12 and g.m == 12


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command"])
    assert exc.value.code == 2


def test_missing_required_flag_exits_2(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    # cycle without --n is a domain error surfaced as exit 2
    assert run(["gen", "--family", "cycle", "--out", "g.graph"]) == 2


def test_missing_graph_file_exits_2(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    rc = run(["spectrum", "--graph", "absent.graph", "--out", "s.csv"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_impractical_theory_params_exit_2(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    rc = run(
        ["local-net", "--family", "random-regular", "--n", "20", "--d", "3",
         "--r", "2", "--theory-params", "--out", "ln.json"]
    )
    assert rc == 2
    assert "too large to run" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# manifests


def test_manifest_shape(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    run(["gen", "--family", "cycle", "--n", "10", "--seed", "7", "--out", "g.graph"])
    man = json.loads((tmp_path / "g.graph.manifest.json").read_text())
    assert set(man) == {"config_sha256", "seed", "versions"}
    assert len(man["config_sha256"]) == 64
    assert man["seed"] == 7
    assert set(man["versions"]) >= {"python", "numpy", "scipy", "spectop"}
    assert "time" not in (tmp_path / "g.graph.manifest.json").read_text()


def test_manifest_ignores_worker_count(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    base = ["verify", "rad-drop", "--family", "cycle", "--n", "16", "--r", "1",
            "--trials", "2", "--out", "a.csv"]
    assert run(base + ["--workers", "1"]) == 0
    man_a = (tmp_path / "a.csv.manifest.json").read_bytes()
    csv_a = (tmp_path / "a.csv").read_bytes()
    assert run(base + ["--workers", "3"]) == 0
    assert (tmp_path / "a.csv.manifest.json").read_bytes() == man_a
    assert (tmp_path / "a.csv").read_bytes() == csv_a


def test_config_hash_sensitive_to_values():
    h1 = config_hash({"cmd": "gen", "n": 10})
    h2 = config_hash({"cmd": "gen", "n": 11})
    assert h1 != h2
    assert h1 == config_hash({"n": 10, "cmd": "gen"})


# ---------------------------------------------------------------------------
# spectrum / walks output formats


def test_spectrum_csv_and_interval_query(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = run(
        ["spectrum", "--family", "cycle", "--n", "12", "--interval=-2:2",
         "--query-out", "q.json", "--out", "s.csv"]
    )
    assert rc == 0
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "index,eigenvalue"
    assert len(lines) == 13
    assert float(lines[-1].split(",")[1]) == pytest.approx(2.0, abs=1e-9)
    q = json.loads((tmp_path / "q.json").read_text())
    assert set(q) == {"a", "b", "closed_a", "closed_b", "count", "mu"}
    assert q["count"] == 12 and q["mu"] == 1.0


def test_walks_tree_csv(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(["walks", "tree", "--d", "4", "--N", "3", "--out", "t.csv"]) == 0
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "n,p_2n,scaled"
    assert lines[2].startswith("1,0.25,")


def test_walks_fit_json(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = run(["walks", "fit", "--d", "3", "--N", "400", "--window", "50:400",
              "--out", "fit.json"])
    assert rc == 0
    rec = json.loads((tmp_path / "fit.json").read_text())
    assert rec["rho_true"] == pytest.approx(2 * math.sqrt(2))
    assert abs(rec["rho_hat"] - rec["rho_true"]) / rec["rho_true"] < 0.02


# ---------------------------------------------------------------------------
# verify suites end to end


def test_rad_drop_rows(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = run(
        ["verify", "rad-drop", "--family", "cycle", "--n", "30", "--r", "2",
         "--method", "both", "--p", "0.3", "--trials", "3", "--out", "rd.csv"]
    )
    assert rc == 0
    lines = (tmp_path / "rd.csv").read_text().splitlines()
    assert lines[0] == "trial,seed,n,method,r,net_size,lam1_g,lam1_h,lhs,rhs,ok"
    assert len(lines) == 1 + 3 * 2
    assert all(line.endswith("true") for line in lines[1:])
    assert not (tmp_path / "rd.csv.violations.json").exists()


def test_finite_param_cli(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = run(
        ["verify", "finite-param", "--family", "cycle", "--n", "30",
         "--theta", "0.3", "--r", "1", "--s", "3", "--trials", "2",
         "--out", "fp.csv"]
    )
    assert rc == 0
    lines = (tmp_path / "fp.csv").read_text().splitlines()
    assert len(lines) == 3
    assert all(line.endswith("true") for line in lines[1:])


def test_thm_second_eig_report(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = run(["verify", "thm", "--variant", "second-eig", "--family", "cycle",
              "--n", "64", "--out", "thm.json"])
    assert rc == 0
    rep = json.loads((tmp_path / "thm.json").read_text())
    assert rep["kind"] == "thm-second-eig"
    assert rep["ok"] is True
    assert rep["implied_constant"] == pytest.approx(rep["lhs"] / rep["rate"])
    assert rep["params"]["theta"] == pytest.approx(10.0 / 6.0)


# ---------------------------------------------------------------------------
# sweep


def sweep_config(tmp_path, **overrides):
    cfg = {
        "suite": "rad-drop",
        "seed": 5,
        "families": [{"family": "cycle", "n": 20}],
        "grid": {"trials": 2, "r": [1, 2]},
    }
    cfg.update(overrides)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_sweep_clean(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = run(["sweep", "--config", sweep_config(tmp_path)])
    assert rc == 0
    out = tmp_path / "sweep-out" / "rad-drop.csv"
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 2 * 2
    assert (tmp_path / "sweep-out" / "rad-drop.csv.manifest.json").exists()


def test_sweep_tolerance_violation_exits_1(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    cfg = sweep_config(tmp_path, tolerances={"rad-drop": -1000.0})
    rc = run(["sweep", "--config", cfg])
    assert rc == 1
    err = capsys.readouterr().err
    assert "FAIL" in err and "serialized for replay" in err
    sidecar = tmp_path / "sweep-out" / "rad-drop.csv.violations.json"
    records = json.loads(sidecar.read_text())
    assert records and records[0]["suite"] == "rad-drop"
    assert records[0]["row"]["ok"] == "false"


def test_sweep_rejects_unknown_keys(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(GraphError, match="unknown config keys"):
        ExperimentConfig.from_dict({"suite": "rad-drop", "bogus": 1})
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"suite": "rad-drop", "bogus": 1}))
    assert run(["sweep", "--config", str(cfg)]) == 2


# ---------------------------------------------------------------------------
# determinism


BATTERY = [
    ["gen", "--family", "random-regular", "--n", "24", "--d", "4",
     "--seed", "3", "--out", "g.graph"],
    ["verify", "rad-drop", "--family", "random-regular", "--n", "24", "--d", "4",
     "--r", "1", "--trials", "5", "--seed", "11", "--out", "rd.csv"],
    ["verify", "interlace", "--family", "cycle", "--n", "18", "--u-size", "3",
     "--trials", "4", "--seed", "2", "--out", "il.csv"],
    ["walks", "tree", "--d", "3", "--N", "20", "--out", "walks.csv"],
]


def run_battery(root, monkeypatch, workers):
    monkeypatch.setenv("SPECTOP_WORKERS", str(workers))
    monkeypatch.chdir(root)
    for argv in BATTERY:
        assert run(list(argv)) == 0
    cfg = {
        "suite": "second-eig",
        "seed": 9,
        "families": [{"family": "cycle"}, {"family": "random-regular", "d": 4}],
        "grid": {"n": [32, 64]},
    }
    (root / "cfg.json").write_text(json.dumps(cfg, sort_keys=True))
    assert run(["sweep", "--config", "cfg.json"]) == 0
    out = {}
    for p in sorted(root.rglob("*")):
        if p.is_file() and p.name != "cfg.json":
            out[str(p.relative_to(root))] = p.read_bytes()
    return out


def test_same_seed_same_bytes_across_workers(tmp_path, monkeypatch):
    a = tmp_path / "a"
    b = tmp_path / "b"
    a.mkdir()
    b.mkdir()
    out_a = run_battery(a, monkeypatch, workers=1)
    out_b = run_battery(b, monkeypatch, workers=4)
    assert sorted(out_a) == sorted(out_b)
    for name in out_a:
        assert out_a[name] == out_b[name], name


def test_trial_seed_streams_independent():
    seeds = {trial_seed(0, i) for i in range(100)}
    assert len(seeds) == 100
    assert trial_seed(0, 1) != trial_seed(1, 0)


def test_fmt_float_formatting():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(True) == "true"
    assert fmt(2.0) == "2"
    assert fmt("x") == "x"
