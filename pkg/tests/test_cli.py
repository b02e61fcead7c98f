import csv
import json
import os

import numpy as np
import pytest

from dpisat.cli import main, random_positive_state

from _fixtures import classical_kl

PINCHING_SCENARIO = {
    "name": "pinching-relent",
    "measure": {"family": "relative_entropy"},
    "channel": {"builder": "dephasing_pinching", "dim": 2},
    "rho": {"builder": "diag", "values": [0.6, 0.4]},
    "sigma": {"builder": "diag", "values": [0.3, 0.7]},
    "checks": ["gap", "residual1", "residual2", "converse", "petz"],
}

DEPOLARIZING_SCENARIO = {
    "name": "depolarizing-gap",
    "measure": {"family": "relative_entropy"},
    "channel": {"builder": "depolarizing", "dim": 2, "p": 0.5},
    "rho": {"builder": "diag", "values": [0.9, 0.1]},
    "sigma": {"builder": "diag", "values": [0.5, 0.5]},
    "checks": ["gap"],
}

RANDOM_SCENARIO = {
    "name": "random-alphaz",
    "measure": {"family": "alpha_z", "alpha": 1.5, "z": 1.2},
    "channel": {"builder": "depolarizing", "dim": 3, "p": 0.3},
    "rho": {"builder": "random_pos", "dim": 3, "seed": 42},
    "sigma": {"builder": "random_pos", "dim": 3, "seed": 43},
    "checks": ["gap", "residual1", "converse", "petz", "alpha_z_crosscheck"],
}

BOUNDARY_SCENARIO = {
    "name": "boundary-rank2",
    "measure": {"family": "relative_entropy"},
    "channel": {"builder": "dephasing_pinching", "dim": 3},
    "rho": {"builder": "diag", "values": [0.7, 0.3, 0.0]},
    "sigma": {"builder": "diag", "values": [0.5, 0.3, 0.2]},
    "checks": ["gap", "boundary", "tangent"],
}


def write_scenarios(path, scenarios):
    path.write_text(json.dumps(scenarios), encoding="utf-8")


def load_report(out_dir, name):
    with open(os.path.join(out_dir, f"{name}.json"), "r", encoding="utf-8") as fh:
        return json.load(fh)


class TestRun:
    def test_saturating_scenario_passes(self, tmp_path):
        scen = tmp_path / "scen.json"
        write_scenarios(scen, [PINCHING_SCENARIO])
        out = tmp_path / "out"
        assert main(["run", str(scen), "--out", str(out)]) == 0
        rep = load_report(out, "pinching-relent")
        assert rep["passed"] is True
        assert rep["saturated"] is True
        assert all(c["passed"] for c in rep["checks"].values())

    def test_depolarizing_gap_value(self, tmp_path):
        scen = tmp_path / "scen.json"
        write_scenarios(scen, [DEPOLARIZING_SCENARIO])
        out = tmp_path / "out"
        assert main(["run", str(scen), "--out", str(out)]) == 0
        rep = load_report(out, "depolarizing-gap")
        oracle = classical_kl([0.9, 0.1], [0.5, 0.5]) - classical_kl([0.7, 0.3], [0.5, 0.5])
        assert rep["gap"] == pytest.approx(oracle, abs=1e-9)
        assert rep["checks"]["gap"]["passed"] is True

    def test_boundary_scenario(self, tmp_path):
        scen = tmp_path / "scen.json"
        write_scenarios(scen, [BOUNDARY_SCENARIO])
        out = tmp_path / "out"
        assert main(["run", str(scen), "--out", str(out)]) == 0
        rep = load_report(out, "boundary-rank2")
        assert rep["checks"]["boundary"]["zeros_log_norm"] <= 1e-8
        assert rep["checks"]["tangent"]["measured"] == 8

    def test_determinism_with_fixed_seeds(self, tmp_path):
        scen = tmp_path / "scen.json"
        write_scenarios(scen, [RANDOM_SCENARIO, PINCHING_SCENARIO])
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["run", str(scen), "--out", str(out1)]) == 0
        assert main(["run", str(scen), "--out", str(out2)]) == 0
        for name in ("random-alphaz", "pinching-relent"):
            r1, r2 = load_report(out1, name), load_report(out2, name)
            r1.pop("generated_at")
            r2.pop("generated_at")
            assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)

    def test_failing_check_gives_exit_one(self, tmp_path):
        # Deliberately inconsistent tolerances: a gap_tol of 1 declares the
        # depolarizing instance saturated, so its large residual must fail.
        scen = tmp_path / "scen.json"
        failing = dict(DEPOLARIZING_SCENARIO)
        failing["name"] = "forced-failure"
        failing["checks"] = ["residual1"]
        failing["tolerances"] = {"gap_tol": 1.0}
        write_scenarios(scen, [failing])
        out = tmp_path / "out"
        assert main(["run", str(scen), "--out", str(out)]) == 1
        rep = load_report(out, "forced-failure")
        assert rep["passed"] is False
        assert rep["checks"]["residual1"]["passed"] is False

    def test_seed_env_override_changes_states(self, tmp_path, monkeypatch):
        scen = tmp_path / "scen.json"
        write_scenarios(scen, [RANDOM_SCENARIO])
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["run", str(scen), "--out", str(out1)]) == 0
        monkeypatch.setenv("DPISAT_SEED", "777")
        assert main(["run", str(scen), "--out", str(out2)]) == 0
        r1, r2 = load_report(out1, "random-alphaz"), load_report(out2, "random-alphaz")
        assert r1["gap"] != r2["gap"]
        assert r2["seeds"] == {"rho": 777, "sigma": 777}

    def test_no_temp_files_left(self, tmp_path):
        scen = tmp_path / "scen.json"
        write_scenarios(scen, [PINCHING_SCENARIO])
        out = tmp_path / "out"
        main(["run", str(scen), "--out", str(out)])
        assert not [p for p in os.listdir(out) if p.endswith(".tmp")]

    def test_dump_matrices_embeds_residuals(self, tmp_path):
        scen = tmp_path / "scen.json"
        write_scenarios(scen, [PINCHING_SCENARIO])
        out = tmp_path / "out"
        assert main(["run", str(scen), "--out", str(out), "--dump-matrices"]) == 0
        rep = load_report(out, "pinching-relent")
        assert rep["residual1"]["dim"] == 2
        assert rep["residual2"]["dim"] == 2


class TestSchemaErrors:
    def test_non_hermitian_matrix(self, tmp_path, capsys):
        scen = tmp_path / "scen.json"
        bad = dict(PINCHING_SCENARIO)
        bad["rho"] = {"dim": 2, "entries": [[[1, 0], [0.5, 0]], [[0, 0], [1, 0]]]}
        write_scenarios(scen, [bad])
        assert main(["run", str(scen), "--out", str(tmp_path / "out")]) == 2
        err = capsys.readouterr().err
        assert "scenario[0].rho" in err

    def test_missing_seed(self, tmp_path, capsys):
        scen = tmp_path / "scen.json"
        bad = dict(RANDOM_SCENARIO)
        bad["rho"] = {"builder": "random_pos", "dim": 3}
        write_scenarios(scen, [bad])
        assert main(["run", str(scen), "--out", str(tmp_path / "out")]) == 2
        assert "seed" in capsys.readouterr().err

    def test_unknown_check(self, tmp_path, capsys):
        scen = tmp_path / "scen.json"
        bad = dict(PINCHING_SCENARIO)
        bad["checks"] = ["gap", "telepathy"]
        write_scenarios(scen, [bad])
        assert main(["run", str(scen), "--out", str(tmp_path / "out")]) == 2
        assert "checks[1]" in capsys.readouterr().err

    def test_inapplicable_check_for_rank(self, tmp_path, capsys):
        scen = tmp_path / "scen.json"
        bad = dict(BOUNDARY_SCENARIO)
        bad["checks"] = ["residual1"]
        write_scenarios(scen, [bad])
        assert main(["run", str(scen), "--out", str(tmp_path / "out")]) == 2
        assert "positive" in capsys.readouterr().err

    def test_out_of_region_measure(self, tmp_path, capsys):
        scen = tmp_path / "scen.json"
        bad = dict(RANDOM_SCENARIO)
        bad["measure"] = {"family": "alpha_z", "alpha": 1.5, "z": 0.5}
        write_scenarios(scen, [bad])
        assert main(["run", str(scen), "--out", str(tmp_path / "out")]) == 2
        assert "measure" in capsys.readouterr().err

    def test_allow_non_dpi_flag_admits_region(self, tmp_path):
        scen = tmp_path / "scen.json"
        loose = dict(RANDOM_SCENARIO)
        loose["name"] = "loose"
        loose["measure"] = {"family": "alpha_z", "alpha": 1.5, "z": 0.5}
        loose["checks"] = ["residual1"]
        write_scenarios(scen, [loose])
        out = tmp_path / "out"
        assert main(["run", str(scen), "--out", str(out), "--allow-non-dpi"]) == 0

    def test_invalid_json_file(self, tmp_path, capsys):
        scen = tmp_path / "scen.json"
        scen.write_text("{not json", encoding="utf-8")
        assert main(["run", str(scen), "--out", str(tmp_path / "out")]) == 2

    def test_missing_file(self, tmp_path):
        assert main(["run", str(tmp_path / "nope.json"), "--out", str(tmp_path / "out")]) == 2

    def test_duplicate_names(self, tmp_path, capsys):
        scen = tmp_path / "scen.json"
        write_scenarios(scen, [PINCHING_SCENARIO, PINCHING_SCENARIO])
        assert main(["run", str(scen), "--out", str(tmp_path / "out")]) == 2
        assert "unique" in capsys.readouterr().err


class TestValidate:
    def test_valid_file(self, tmp_path):
        scen = tmp_path / "scen.json"
        write_scenarios(scen, [PINCHING_SCENARIO, DEPOLARIZING_SCENARIO])
        assert main(["validate", str(scen)]) == 0

    def test_invalid_file(self, tmp_path):
        scen = tmp_path / "scen.json"
        bad = dict(PINCHING_SCENARIO)
        bad["measure"] = {"family": "nope"}
        write_scenarios(scen, [bad])
        assert main(["validate", str(scen)]) == 2


UNITARY_CHANNEL_JSON = {
    "builder": "unitary",
    "matrix": {"dim": 2, "entries": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
}


class TestSweep:
    def _sweep(self, tmp_path, measure, grid, channel, extra=()):
        out = tmp_path / "sweep.csv"
        args = [
            "sweep",
            "--measure", measure,
            "--grid", grid,
            "--channel", json.dumps(channel),
            "--rho", json.dumps({"builder": "random_pos", "dim": 2, "seed": 5}),
            "--sigma", json.dumps({"builder": "random_pos", "dim": 2, "seed": 6}),
            "--out", str(out),
            *extra,
        ]
        assert main(args) == 0
        with open(out, newline="", encoding="utf-8") as fh:
            return list(csv.DictReader(fh))

    def test_unitary_alpha_sweep_all_saturate(self, tmp_path):
        rows = self._sweep(
            tmp_path, "sandwiched_renyi", "alpha=0.5:3.0:0.25", UNITARY_CHANNEL_JSON
        )
        alphas = [float(r["alpha"]) for r in rows]
        assert 1.0 not in alphas
        assert len(alphas) == 10
        for row in rows:
            assert float(row["residual1_norm"]) <= 1e-8
            assert float(row["residual2_norm"]) <= 1e-8

    def test_alpha_z_grid_gaps_nonnegative(self, tmp_path):
        rows = self._sweep(
            tmp_path,
            "alpha_z",
            "alpha=0.5:2.5:0.5;z=0.5:2.5:0.5",
            {"builder": "depolarizing", "dim": 2, "p": 0.4},
        )
        assert rows, "grid should contain in-region points"
        for row in rows:
            assert float(row["gap"]) >= -1e-9

    def test_z_equals_alpha_diagonal_matches_sandwiched(self, tmp_path):
        dep = {"builder": "depolarizing", "dim": 2, "p": 0.4}
        az_rows = self._sweep(tmp_path, "alpha_z", "alpha=0.5:2.5:0.5;z=0.5:2.5:0.5", dep)
        sr_rows = self._sweep(tmp_path, "sandwiched_renyi", "alpha=0.5:2.5:0.5", dep)
        diag = {float(r["alpha"]): r for r in az_rows if float(r["alpha"]) == float(r["z"])}
        for row in sr_rows:
            alpha = float(row["alpha"])
            assert alpha in diag
            for col in ("gap", "residual1_norm", "residual2_norm"):
                assert float(row[col]) == pytest.approx(float(diag[alpha][col]), abs=1e-10)

    def test_out_of_region_points_skipped_with_warning(self, tmp_path, capsys):
        rows = self._sweep(
            tmp_path,
            "alpha_z",
            "alpha=1.5:1.5:1.0;z=0.25:2.0:0.25",
            {"builder": "depolarizing", "dim": 2, "p": 0.4},
        )
        err = capsys.readouterr().err
        assert "skipping" in err
        zs = [float(r["z"]) for r in rows]
        assert min(zs) >= 0.75 - 1e-12 and max(zs) <= 1.5 + 1e-12

    def test_allow_non_dpi_computes_everything(self, tmp_path):
        rows = self._sweep(
            tmp_path,
            "alpha_z",
            "alpha=1.5:1.5:1.0;z=0.25:2.0:0.25",
            {"builder": "depolarizing", "dim": 2, "p": 0.4},
            extra=["--allow-non-dpi"],
        )
        assert len(rows) == 8  # all z points, alpha=1.5


class TestRandomStateBuilder:
    def test_reproducible(self):
        a = random_positive_state(3, 42)
        b = random_positive_state(3, 42)
        assert np.array_equal(a, b)

    def test_strictly_positive(self):
        for seed in range(5):
            w = np.linalg.eigvalsh(random_positive_state(4, seed))
            assert w[0] >= 0.1 - 1e-12
