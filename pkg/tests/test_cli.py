import json

import pytest

from radon_minimax.cli import main, read_config
from radon_minimax.harness import Table


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_csv(capsys):
    code, out, _ = run(capsys, "solve", "--normalized", "--r", "0.01", "--eps", "1e-3")
    assert code == 0
    tab = Table.from_csv(out)
    assert tab.records()[0]["support"] == 790
    assert tab.meta["version"] == "0.1.0" and "spec_hash" in tab.meta


def test_solve_json_to_file(tmp_path, capsys):
    path = tmp_path / "sol.json"
    code, out, _ = run(capsys, "solve", "--normalized", "--r", "0.05", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    tab = Table.from_json(path.read_text())
    assert tab.records()[0]["r"] == 0.05


def test_config_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nnormalized = true\nr = 0.05\neps = 0.01\nL = 2\n")
    assert read_config(cfg)["L"] == 2.0
    _, out, _ = run(capsys, "solve", "--config", str(cfg))
    row = Table.from_csv(out).records()[0]
    assert (row["r"], row["eps"], row["L"], row["normalized"]) == (0.05, 0.01, 2, True)
    _, out, _ = run(capsys, "solve", "--config", str(cfg), "--r", "0.02")
    assert Table.from_csv(out).records()[0]["r"] == 0.02


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("radius = 3\n")
    code, _, err = run(capsys, "solve", "--config", str(cfg))
    assert code == 2 and "unknown config key" in err


def test_infeasible_radius_exit_code(capsys):
    code, _, err = run(capsys, "solve", "--normalized", "--r", "2")
    assert code == 2 and "exceeds" in err


def test_asymptotics(capsys):
    _, out, _ = run(capsys, "asymptotics", "--A-list", "0.01,0.001")
    assert Table.from_csv(out).column("I")[0] == 957


def test_simulate_modes(capsys):
    _, out, _ = run(capsys, "simulate", "--normalized", "--r", "0.01", "--trials", "500", "--u-targets", "2,4")
    tab = Table.from_csv(out)
    assert [round(u, 9) for u in tab.column("u_eps")] == [2.0, 4.0]
    _, out, _ = run(capsys, "simulate", "--mode", "null-calibration", "--normalized", "--r", "0.02",
                    "--trials", "500")
    assert "expmom_exact" in Table.from_csv(out).columns


def test_simulate_reproducible(capsys):
    args = ("simulate", "--normalized", "--r", "0.01", "--trials", "300", "--seed", "4")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_rate_sweep(capsys):
    _, out, _ = run(capsys, "rate-sweep", "--normalized", "--trials", "200", "--c-values", "0.5,1,2")
    tab = Table.from_csv(out)
    assert len(tab) == 3 and tab.meta["slope_expected"] == 3.5


def test_adaptive(capsys):
    _, out, _ = run(capsys, "adaptive", "--trials", "300", "--p-true", "1.0", "--D-scale", "2.5")
    row = Table.from_csv(out).records()[0]
    assert row["K"] == 14 and row["D_scale"] == 2.5


def test_lower_bound(capsys):
    _, out, _ = run(capsys, "lower-bound", "--d", "1e-4", "--format", "json")
    tab = Table.from_json(out)
    assert tab.meta["bound"] < 0.1
    code, _, err = run(capsys, "lower-bound", "--normalized", "false")
    assert code == 2 and "normalized" in err


def test_svd_verify(capsys):
    _, out, _ = run(capsys, "svd-verify", "--max-degree", "2", "--nodes", "16")
    tab = Table.from_csv(out)
    assert len(tab) == 6 and tab.meta["n_line"] == 16


def test_help_and_version(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0
    assert "0.1.0" in capsys.readouterr().out
    with pytest.raises(SystemExit):
        main([])
