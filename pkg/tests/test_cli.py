"""End-to-end CLI behavior: artifacts, determinism, exit codes."""

import csv
import json
import os

from zeno_bench import cli

BUNDLED = os.path.join(os.path.dirname(__file__), "..", "configs", "bitflip3.json")

CSV_HEADER = (
    "variant,Q,tau,M,epsilon,D_sim,D_bound,D_strong_limit,"
    "B1_over_M,bound_satisfied"
)

REPORT_KEYS = [
    "version",
    "config_hash",
    "variant",
    "Q",
    "J0",
    "J1",
    "tolerance",
    "simulated",
    "points",
    "all_satisfied",
    "max_excess",
    "rows",
]


def write_config(tmp_path, mutate=None, name="config.json"):
    with open(BUNDLED) as fh:
        raw = json.load(fh)
    if mutate:
        mutate(raw)
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return str(path)


def small_grid(raw):
    raw["M_grid"] = [1, 2]
    raw["epsilon_grid"] = [1.0, "inf"]


def test_run_writes_artifacts(tmp_path):
    config = write_config(tmp_path, small_grid)
    out = tmp_path / "out"
    assert cli.main(["run", "--config", config, "--out", str(out)]) == 0
    csv_path = out / "sweep.csv"
    json_path = out / "report.json"
    assert csv_path.exists() and json_path.exists()
    lines = csv_path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 5
    report = json.loads(json_path.read_text())
    assert list(report.keys()) == REPORT_KEYS
    assert report["points"] == 4
    assert report["all_satisfied"] is True
    assert report["simulated"] is True
    assert len(report["rows"]) == 4


def test_run_rows_satisfy_bounds(tmp_path):
    config = write_config(tmp_path, small_grid)
    out = tmp_path / "out"
    cli.main(["run", "--config", config, "--out", str(out)])
    with open(out / "sweep.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        assert row["variant"] == "group"
        assert row["bound_satisfied"] == "true"
        assert float(row["D_sim"]) <= float(row["D_bound"]) + 1e-9
    epsilons = {row["epsilon"] for row in rows}
    assert "inf" in epsilons


def test_run_deterministic(tmp_path):
    config = write_config(tmp_path, small_grid)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    cli.main(["run", "--config", config, "--out", str(out1)])
    cli.main(["run", "--config", config, "--out", str(out2)])
    assert (out1 / "sweep.csv").read_bytes() == (out2 / "sweep.csv").read_bytes()
    assert (out1 / "report.json").read_bytes() == (
        out2 / "report.json"
    ).read_bytes()


def test_parallel_jobs_identical(tmp_path):
    config = write_config(tmp_path, small_grid)
    out1, out2 = tmp_path / "serial", tmp_path / "parallel"
    cli.main(["run", "--config", config, "--out", str(out1)])
    cli.main(["run", "--config", config, "--out", str(out2), "--jobs", "2"])
    assert (out1 / "sweep.csv").read_bytes() == (out2 / "sweep.csv").read_bytes()


def test_bound_subcommand_skips_simulation(tmp_path):
    config = write_config(tmp_path, small_grid)
    out = tmp_path / "out"
    assert cli.main(["bound", "--config", config, "--out", str(out)]) == 0
    with open(out / "sweep.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        assert row["D_sim"] == ""
        assert row["bound_satisfied"] == ""
        assert float(row["D_bound"]) > 0.0
    report = json.loads((out / "report.json").read_text())
    assert report["simulated"] is False
    assert report["all_satisfied"] is None


def test_sweep_subcommand_writes_csv_only(tmp_path):
    config = write_config(tmp_path, small_grid)
    out = tmp_path / "out"
    assert cli.main(["sweep", "--config", config, "--out", str(out)]) == 0
    assert (out / "sweep.csv").exists()
    assert not (out / "report.json").exists()


def test_exit_2_on_schema_violation(tmp_path, capsys):
    config = write_config(tmp_path, lambda raw: raw.update(M_grid=[]))
    code = cli.main(["run", "--config", config, "--out", str(tmp_path / "o")])
    assert code == 2
    assert "M_grid" in capsys.readouterr().err


def test_exit_2_on_missing_file(tmp_path):
    code = cli.main(
        ["run", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]
    )
    assert code == 2


def test_exit_3_on_undetectable_coupling(tmp_path, capsys):
    def add_logical_coupling(raw):
        small_grid(raw)
        raw["terms"].append(
            {"system": "XXX", "bath": [[0.0, 0.02], [0.02, 0.0]]}
        )

    config = write_config(tmp_path, add_logical_coupling)
    code = cli.main(["run", "--config", config, "--out", str(tmp_path / "o")])
    assert code == 3
    err = capsys.readouterr().err
    assert "XXX" in err


def test_exit_4_still_writes_artifacts(tmp_path, capsys):
    config = write_config(tmp_path, small_grid)
    out = tmp_path / "out"
    code = cli.main(
        ["run", "--config", config, "--out", str(out), "--tolerance", "-1"]
    )
    assert code == 4
    assert (out / "sweep.csv").exists()
    assert (out / "report.json").exists()
    assert "bound violation" in capsys.readouterr().err


def test_verify_deterministic(capsys):
    assert cli.main(["verify", "--suite", "pauli", "--seed", "7"]) == 0
    first = capsys.readouterr().out
    assert cli.main(["verify", "--suite", "pauli", "--seed", "7"]) == 0
    second = capsys.readouterr().out
    assert first == second
    report = json.loads(first)
    assert report["passed"] is True
    assert report["seed"] == 7


def test_verify_bounds_suite_includes_phi_grid(capsys):
    assert cli.main(["verify", "--suite", "bounds", "--seed", "1"]) == 0
    report = json.loads(capsys.readouterr().out)
    names = [c["check"] for c in report["checks"]]
    assert "phi_grid" in names


def test_verify_perturbation_negative_control(capsys):
    code = cli.main(
        [
            "verify",
            "--suite",
            "measurement",
            "--seed",
            "3",
            "--perturb-zeta",
            "1e-3",
        ]
    )
    assert code == 1
    captured = capsys.readouterr()
    assert "eigen-action" in captured.err
    report = json.loads(captured.out)
    assert report["passed"] is False
    assert all("eigen_action" in name for name in report["failures"])


def test_recurrence_check(capsys):
    assert cli.main(["recurrence-check"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["phi_grid"]["points"] == 405
    assert report["summand_recurrence"]["samples"] == 200


def test_verify_writes_report(tmp_path):
    out = tmp_path / "verify_out"
    assert (
        cli.main(
            ["verify", "--suite", "pauli", "--seed", "2", "--out", str(out)]
        )
        == 0
    )
    report = json.loads((out / "report.json").read_text())
    assert report["suite"] == "pauli"


def test_out_dir_defaults_to_config_out_dir(tmp_path):
    def set_out(raw):
        small_grid(raw)
        raw["out_dir"] = str(tmp_path / "from_config")

    config = write_config(tmp_path, set_out)
    assert cli.main(["run", "--config", config]) == 0
    assert (tmp_path / "from_config" / "sweep.csv").exists()
