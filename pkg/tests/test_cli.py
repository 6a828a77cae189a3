import json

import numpy as np
import pytest

from shockbeta.cli import main


@pytest.fixture()
def exact_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# exactly solvable validation case\n"
        "flux = quadratic_transverse\n"
        "u_minus = 1.0\n"
        "u_plus = -1.0\n"
        "xi0 = 1.0\n"
        "L = 20\n"
        "N = 1000\n"
        "method = both\n"
    )
    return cfg


def run(args):
    return main([str(a) for a in args])


class TestProfileCommand:
    def test_writes_csv_with_midpoint_row(self, exact_config, tmp_path, capsys):
        out = tmp_path / "out"
        assert run(["profile", "--config", exact_config, "--out-dir", out]) == 0
        lines = (out / "profile.csv").read_text().splitlines()
        rows = [l for l in lines if not l.startswith("#")][1:]
        mid = rows[len(rows) // 2].split(",")
        assert [float(c) for c in mid] == [0.0, 0.0, -0.5]

    def test_small_domain_exits_3(self, exact_config, tmp_path, capsys):
        code = run(["profile", "--config", exact_config, "--L", "1",
                    "--out-dir", tmp_path / "o"])
        assert code == 3
        assert "TailNotResolved" in capsys.readouterr().err

    def test_missing_state_exits_2(self, tmp_path, capsys):
        code = run(["profile", "--flux", "quadratic_transverse",
                    "--u-minus", "1.0", "--xi0", "1.0",
                    "--out-dir", tmp_path / "o"])
        assert code == 2
        assert "u_plus" in capsys.readouterr().err

    def test_unknown_config_key_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("u_minuss = 1.0\n")
        assert run(["profile", "--config", bad]) == 2

    def test_exact_flag(self, exact_config, tmp_path):
        out = tmp_path / "out"
        assert run(["profile", "--config", exact_config, "--exact",
                    "--out-dir", out]) == 0
        assert (out / "profile.csv").exists()


class TestBetaCommand:
    def test_table_reproduction(self, exact_config, tmp_path):
        out = tmp_path / "out"
        assert run(["beta", "--config", exact_config, "--L", "10,20,30",
                    "--N", "2000", "--out-dir", out]) == 0
        manifest = json.loads((out / "beta_manifest.json").read_text())
        assert manifest["sign_stable"] is True
        entries = {(e["method"], e["L"]): e for e in manifest["entries"]}
        assert len(entries) == 6
        for (method, L), e in entries.items():
            target = 9.9918 if L == 10 else 10.0
            assert abs(e["beta"][0] - target) < 5e-3
            assert abs(e["beta"][1]) <= 1e-8
            assert e["sign_re_beta"] == 1
        table = (out / "beta_table.csv").read_text().splitlines()
        assert table[1].split(",") == ["method", "L=10", "L=20", "L=30"]

    def test_method_subset_single_row(self, exact_config, tmp_path):
        out = tmp_path / "out"
        assert run(["beta", "--config", exact_config, "--method", "if",
                    "--N", "600", "--out-dir", out]) == 0
        rows = [
            l for l in (out / "beta_table.csv").read_text().splitlines()
            if not l.startswith("#")
        ]
        assert len(rows) == 2
        assert rows[1].startswith("if,")

    def test_non_neutral_override_exits_2(self, exact_config, tmp_path, capsys):
        code = run(["beta", "--config", exact_config, "--tau0", "0.3",
                    "--out-dir", tmp_path / "o"])
        assert code == 2
        assert "neutral" in capsys.readouterr().err


class TestScanCommand:
    def test_sine_scan_manifest(self, tmp_path):
        out = tmp_path / "out"
        code = run(["scan", "--flux", "sine_transverse", "--u-minus", "1.0",
                    "--u-plus", "-1.0", "--xi0", "1.0", "--L", "20",
                    "--N", "1000", "--u-minus-list", "1.0,1.1,1.2",
                    "--out-dir", out])
        assert code == 0
        manifest = json.loads((out / "scan_manifest.json").read_text())
        assert manifest["stall_index"] is None
        assert len(manifest["points"]) == 3
        for k, p in enumerate(manifest["points"]):
            assert (out / p["file"]).exists()
            assert p["sign_re_beta"] in (-1, 1)
        # speeds recomputed along the chain
        assert manifest["points"][1]["s"] == pytest.approx(0.05)

    def test_stall_preserves_partials_exits_3(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = run(["scan", "--flux", "sine_transverse", "--u-minus", "1.0",
                    "--u-plus", "-1.0", "--xi0", "1.0", "--L", "20",
                    "--N", "800", "--u-minus-list", "1.0,-3.0",
                    "--out-dir", out])
        assert code == 3
        manifest = json.loads((out / "scan_manifest.json").read_text())
        assert manifest["stall_index"] == 1
        assert len(manifest["points"]) == 1
        assert (out / "point_000.csv").exists()

    def test_singleton_scan_matches_beta_point(self, exact_config, tmp_path):
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        assert run(["scan", "--config", exact_config, "--N", "1000",
                    "--u-minus-list", "1.0", "--out-dir", out1]) == 0
        assert run(["beta", "--config", exact_config, "--N", "1000",
                    "--method", "coupled", "--out-dir", out2]) == 0
        scan_beta = json.loads((out1 / "scan_manifest.json").read_text())[
            "points"][0]["beta"]
        beta_entry = json.loads((out2 / "beta_manifest.json").read_text())[
            "entries"][0]["beta"]
        assert scan_beta[0] == pytest.approx(beta_entry[0], abs=1e-9)


class TestCompareCommand:
    def test_error_report(self, exact_config, tmp_path, capsys):
        out = tmp_path / "out"
        assert run(["compare", "--config", exact_config, "--out-dir", out]) == 0
        text = (out / "compare.csv").read_text()
        rows = [l.split(",") for l in text.splitlines() if not l.startswith("#")][1:]
        by_key = {(r[0], r[1]): float(r[2]) for r in rows}
        assert by_key[("coupled", "v")] <= 1e-6
        assert by_key[("if", "v")] <= 1e-4
        assert by_key[("if", "w")] == 0.0
        assert by_key[("coupled", "w")] == 0.0

    def test_no_exact_solution_exits_2(self, tmp_path, capsys):
        code = run(["compare", "--flux", "sine_transverse", "--u-minus", "1.0",
                    "--u-plus", "-1.0", "--xi0", "1.0",
                    "--out-dir", tmp_path / "o"])
        assert code == 2
        assert "exact" in capsys.readouterr().err


class TestDeterminism:
    def test_identical_config_bit_identical_output(self, exact_config, tmp_path):
        outs = []
        for name in ("r1", "r2"):
            out = tmp_path / name
            assert run(["aux", "--config", exact_config, "--method", "if",
                        "--N", "400", "--out-dir", out]) == 0
            outs.append((out / "aux_if.csv").read_bytes())
        assert outs[0] == outs[1]


class TestOverridePrecedence:
    def test_flag_overrides_file(self, exact_config, tmp_path):
        out = tmp_path / "out"
        assert run(["profile", "--config", exact_config, "--N", "500",
                    "--out-dir", out]) == 0
        text = (out / "profile.csv").read_text()
        assert "# N = 500" in text
