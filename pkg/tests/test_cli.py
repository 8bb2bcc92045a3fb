"""Subcommand exit codes, report files, config handling, determinism."""

import json
import math

import pytest

from carlab import read_field
from carlab.cli import main
from carlab.config import RunConfig, build_config, load_config_file, parse_ints, parse_reals

WIDE_L = repr(16 * math.pi)


def run_cli(args, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return main(args)


class TestParsing:
    def test_range_grammar_inclusive(self):
        assert parse_reals("0:16:1") == tuple(float(t) for t in range(17))
        assert parse_reals("0:1:0.25") == (0.0, 0.25, 0.5, 0.75, 1.0)

    def test_comma_list_and_scalar(self):
        assert parse_reals("4,8,16") == (4.0, 8.0, 16.0)
        assert parse_reals("4") == (4.0,)

    def test_int_lists(self):
        assert parse_ints("-2:2:1") == (-2, -1, 0, 1, 2)
        with pytest.raises(ValueError):
            parse_ints("0.5,1")

    def test_bad_range_rejected(self):
        with pytest.raises(ValueError):
            parse_reals("0:1")
        with pytest.raises(ValueError):
            parse_reals("1:0:1")


class TestConfigFile:
    def test_key_value_with_aliases_and_comments(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text(
            "# reference run\n"
            "n = 128\n"
            "L = 2.0\n"
            "t = 0:4:1\n"
            "seed = 7\n"
            "\n"
            "fn = bump:1,0,0.5\n"
        )
        overrides = load_config_file(cfg_file)
        cfg = build_config(cfg_file, {})
        assert cfg.n == 128
        assert cfg.half_width == 2.0
        assert cfg.t_list == (0.0, 1.0, 2.0, 3.0, 4.0)
        assert cfg.rng_seed == 7
        assert cfg.fn == "bump:1,0,0.5"
        assert overrides["half_width"] == 2.0

    def test_cli_flags_override_file(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("n = 128\nL = 2.0\n")
        cfg = build_config(cfg_file, {"n": 256})
        assert cfg.n == 256
        assert cfg.half_width == 2.0

    def test_unknown_key_rejected(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("volume = 3\n")
        with pytest.raises(ValueError, match="unknown config key"):
            load_config_file(cfg_file)

    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.n == 512
        assert cfg.fmt == "json"


class TestExitCodes:
    def test_grid_info(self, tmp_path, monkeypatch, capsys):
        rc = run_cli(["grid-info", "--n", "256", "--L", "4"], tmp_path, monkeypatch)
        assert rc == 0
        out = capsys.readouterr().out
        assert "resolvable" in out

    def test_missing_fn_is_usage_error(self, tmp_path, monkeypatch):
        rc = run_cli(["carleman-sweep", "--n", "64", "--L", "4"], tmp_path, monkeypatch)
        assert rc == 2

    def test_unknown_label_lists_registry(self, tmp_path, monkeypatch, capsys):
        rc = run_cli(
            ["carleman-sweep", "--n", "64", "--L", "4", "--fn", "blob:1"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 2
        assert "bump:cre,cim,radius" in capsys.readouterr().err

    def test_p_out_of_range_is_usage_error(self, tmp_path, monkeypatch):
        rc = run_cli(
            ["carleman-sweep", "--n", "64", "--L", "4", "--p", "2.0", "--fn", "bump:2,0,1"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 2

    def test_carleman_small_reference_passes(self, tmp_path, monkeypatch):
        rc = run_cli(
            ["carleman-sweep", "--n", "128", "--L", "4", "--fn", "bump:2,0,1",
             "--t", "0:4:1", "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 0
        reports = list(tmp_path.glob("carleman-sweep-*.json"))
        assert len(reports) == 1
        payload = json.loads(reports[0].read_text())
        assert payload["schema"] == "carlab-report/1"
        assert payload["pass"] is True
        assert payload["parameters"]["config"]["n"] == 128
        assert "timestamp" not in payload

    def test_unresolved_kernel_band_listed(self, tmp_path, monkeypatch, capsys):
        rc = run_cli(
            ["kernel-bound", "--n", "256", "--L", "4", "--k", "0:3:1"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 2
        assert "not resolvable" in capsys.readouterr().err

    def test_kernel_bound_passes_on_resolved_bands(self, tmp_path, monkeypatch):
        rc = run_cli(
            ["kernel-bound", "--n", "256", "--L", WIDE_L, "--k", "-1:1:1",
             "--delta", "0.5", "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 0

    def test_lp_chain_white_noise_leaks(self, tmp_path, monkeypatch, capsys):
        rc = run_cli(
            ["lp-chain", "--n", "128", "--L", WIDE_L, "--fn", "noise", "--k", "-1:1:1"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 2
        assert "leakage" in capsys.readouterr().err

    def test_lp_chain_three_band_passes(self, tmp_path, monkeypatch):
        rc = run_cli(
            ["lp-chain", "--n", "256", "--L", WIDE_L, "--fn", "bands:-1,0,1",
             "--k", "-2:2:1", "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 0

    def test_solve_dbar_zero_potential(self, tmp_path, monkeypatch):
        rc = run_cli(
            ["solve-dbar", "--n", "64", "--L", "4", "--potential", "vpow:0,0.5,0",
             "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 0

    def test_solve_dbar_contraction_refusal(self, tmp_path, monkeypatch, capsys):
        rc = run_cli(
            ["solve-dbar", "--n", "64", "--L", "4", "--potential", "vpow:0,0.5,10",
             "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 1
        assert "contraction" in capsys.readouterr().err

    def test_dump_fields_writes_crf1(self, tmp_path, monkeypatch):
        rc = run_cli(
            ["solve-dbar", "--n", "64", "--L", "4", "--dump-fields", "--out", "sol",
             "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 0
        dumped = read_field(tmp_path / "sol.u.crf1")
        assert dumped.grid.n == 64

    def test_csv_format(self, tmp_path, monkeypatch):
        rc = run_cli(
            ["carleman-sweep", "--n", "128", "--L", "4", "--fn", "bump:2,0,1",
             "--t", "0:3:1", "--format", "csv", "--out", "sweep", "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 0
        lines = (tmp_path / "sweep.csv").read_text().strip().splitlines()
        assert lines[0] == "axis,ratio,witness"
        assert len(lines) == 5


class TestPerCommandDeltaDefaults:
    def test_t_ratio_single_delta_is_degenerate_sweep(self, tmp_path, monkeypatch):
        rc = run_cli(
            ["t-ratio", "--n", "128", "--L", WIDE_L, "--k", "0:1:1",
             "--delta", "4", "--out", "single", "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 0
        payload = json.loads((tmp_path / "single.json").read_text())
        assert len(payload["constants"][0]["series"]) == 1
        assert any("degenerate" in n for n in payload["notes"])

    def test_empty_k_list_is_usage_error(self, tmp_path, monkeypatch):
        rc = run_cli(["kernel-bound", "--n", "256", "--L", WIDE_L, "--k", ","],
                     tmp_path, monkeypatch)
        assert rc == 2

    def test_sweep_csv_written_alongside_json(self, tmp_path, monkeypatch):
        rc = run_cli(
            ["tk-ratio", "--n", "128", "--L", WIDE_L, "--k", "0:1:1",
             "--out", "ratios", "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 0
        assert (tmp_path / "ratios.json").exists()
        csv = (tmp_path / "ratios.csv").read_text().splitlines()
        assert csv[0] == "axis,ratio,witness"


class TestUcDemo:
    def test_reference_demo_exits_zero(self, tmp_path, monkeypatch):
        rc = run_cli(
            ["uc-demo", "--n", "256", "--L", "4", "--r", "0.2", "--t", "0:8:1",
             "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 0
        payload = json.loads(next(tmp_path.glob("uc-demo-*.json")).read_text())
        assert payload["pass"] is True
        assert payload["parameters"]["absorption_margin"] > 0

    def test_ball_as_large_as_box_fails_with_suggestion(self, tmp_path, monkeypatch, capsys):
        rc = run_cli(
            ["uc-demo", "--n", "256", "--L", "4", "--r", "4.0", "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 1
        out = capsys.readouterr().out
        assert "r too large" in out
        assert "largest r with positive margin" in out

    def test_origin_overlapping_control_detects_divergence(self, tmp_path, monkeypatch, capsys):
        rc = run_cli(
            ["uc-demo", "--n", "256", "--L", "4", "--r", "0.2",
             "--seed-fn", "bump:0.15,0,0.1", "--no-solve", "--no-timestamp"],
            tmp_path,
            monkeypatch,
        )
        assert rc == 1
        assert "geometric divergence" in capsys.readouterr().out


class TestConfigDrivenDemo:
    def test_uc_demo_from_config_file(self, tmp_path, monkeypatch):
        cfg = tmp_path / "demo.cfg"
        cfg.write_text(
            "n = 256\n"
            "L = 4.0\n"
            "r = 0.2\n"
            "t = 0:6:1\n"
            "no_timestamp = true\n"
            "out = demo-report\n"
        )
        rc = run_cli(["uc-demo", "--config", str(cfg)], tmp_path, monkeypatch)
        assert rc == 0
        payload = json.loads((tmp_path / "demo-report.json").read_text())
        echo = payload["parameters"]["config"]
        assert echo["n"] == 256
        assert echo["t_list"] == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]

    def test_flag_overrides_config_file(self, tmp_path, monkeypatch):
        cfg = tmp_path / "demo.cfg"
        cfg.write_text("n = 256\nL = 4.0\n")
        rc = run_cli(
            ["grid-info", "--config", str(cfg), "--n", "128"], tmp_path, monkeypatch
        )
        assert rc == 0


class TestDeterminism:
    CMD = ["carleman-sweep", "--n", "128", "--L", "4", "--fn", "bump:2,0,1",
           "--t", "0:3:1", "--no-timestamp"]

    def test_identical_config_gives_identical_bytes(self, tmp_path, monkeypatch):
        d1 = tmp_path / "one"
        d2 = tmp_path / "two"
        d1.mkdir()
        d2.mkdir()
        assert run_cli(list(self.CMD), d1, monkeypatch) == 0
        assert run_cli(list(self.CMD), d2, monkeypatch) == 0
        f1 = next(d1.glob("*.json"))
        f2 = next(d2.glob("*.json"))
        assert f1.name == f2.name  # config-hash naming
        assert f1.read_bytes() == f2.read_bytes()

    def test_seed_changes_report_name_only_when_material(self, tmp_path, monkeypatch):
        # tk-ratio uses the rng seed; two different seeds give different
        # (but individually reproducible) reports
        base = ["tk-ratio", "--n", "128", "--L", WIDE_L, "--k", "0:1:1",
                "--delta", "0.5", "--no-timestamp"]
        d1 = tmp_path / "a"
        d2 = tmp_path / "b"
        d1.mkdir()
        d2.mkdir()
        assert run_cli(base + ["--seed", "1"], d1, monkeypatch) == 0
        assert run_cli(base + ["--seed", "2"], d2, monkeypatch) == 0
        f1 = next(d1.glob("*.json"))
        f2 = next(d2.glob("*.json"))
        assert f1.name != f2.name
