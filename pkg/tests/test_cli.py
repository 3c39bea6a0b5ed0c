"""End-to-end CLI behavior: output schemas, precedence, exit codes."""

import datetime
import json
import os

import numpy as np
import pytest

from sharpsphere.cli import main

PI = np.pi

SMALL_VERIFY = ["verify", "--n-t", "24", "--n-c", "18", "--n-r", "12", "--degree", "4"]


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    # Tests control SEL_* explicitly; strip any ambient config.
    for key in list(os.environ):
        if key.startswith("SEL_"):
            monkeypatch.delenv(key)


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def drop_timestamp(text):
    return "\n".join(line for line in text.splitlines() if '"timestamp"' not in line)


class TestSpectrum:
    def test_csv_schema_and_closed_form(self, capsys):
        code, out, _ = run_cli(capsys, ["spectrum"])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "k,lambda_closed,lambda_quadrature,abs_diff"
        assert len(lines) == 52   # header + k = 0..50
        k0 = lines[1].split(",")
        k1 = lines[2].split(",")
        assert float(k0[1]) == 8.0 / 3.0
        assert float(k1[1]) == -8.0 / 15.0
        for line in lines[1:]:
            assert float(line.split(",")[3]) <= 1e-10

    def test_degree_flag(self, capsys):
        code, out, _ = run_cli(capsys, ["spectrum", "--degree", "8"])
        assert code == 0
        assert len(out.splitlines()) == 10

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, ["spectrum", "--degree", "4", "--json"])
        payload = json.loads(out)
        assert code == 0
        assert payload["max_degree"] == 4
        assert len(payload["rows"]) == 5
        assert set(payload["rows"][0]) == {"k", "lambda_closed",
                                           "lambda_quadrature", "abs_diff"}

    def test_byte_identical_reruns(self, capsys):
        _, first, _ = run_cli(capsys, ["spectrum"])
        _, second, _ = run_cli(capsys, ["spectrum"])
        assert first == second


class TestIdentity:
    def test_json_schema(self, capsys):
        code, out, _ = run_cli(capsys, ["identity", "--samples", "2000"])
        payload = json.loads(out)
        assert code == 0
        assert set(payload) == {"samples", "max_abs_deviation_from_4", "seed",
                                "timestamp"}
        assert payload["samples"] == 2000
        assert payload["seed"] == 1234
        assert payload["max_abs_deviation_from_4"] <= 1e-12
        datetime.datetime.fromisoformat(payload["timestamp"])

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(capsys, ["identity", "--samples", "500", "--csv"])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "samples,max_abs_deviation_from_4,seed"
        assert len(lines) == 2

    def test_deterministic_up_to_timestamp(self, capsys):
        _, first, _ = run_cli(capsys, ["identity", "--samples", "2000"])
        _, second, _ = run_cli(capsys, ["identity", "--samples", "2000"])
        assert first != second   # timestamps differ
        assert drop_timestamp(first) == drop_timestamp(second)

    def test_default_sample_count(self, capsys):
        _, out, _ = run_cli(capsys, ["identity"])
        assert json.loads(out)["samples"] == 10_000


class TestConfigPrecedence:
    def test_env_used_without_flag(self, capsys, monkeypatch):
        monkeypatch.setenv("SEL_SAMPLES", "777")
        _, out, _ = run_cli(capsys, ["identity"])
        assert json.loads(out)["samples"] == 777

    def test_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("SEL_SAMPLES", "777")
        _, out, _ = run_cli(capsys, ["identity", "--samples", "333"])
        assert json.loads(out)["samples"] == 333

    def test_invalid_env_is_usage_error(self, capsys, monkeypatch):
        monkeypatch.setenv("SEL_SEED", "abc")
        with pytest.raises(SystemExit) as exc_info:
            main(["identity"])
        assert exc_info.value.code == 2
        assert "SEL_SEED" in capsys.readouterr().err


class TestSearch:
    def test_default_run_reaches_maximizer(self, capsys):
        code, out, _ = run_cli(capsys, ["search"])
        payload = json.loads(out)
        assert code == 0
        verdict = payload["verdict"]
        assert set(verdict) == {"converged", "reason", "at_known_maximizer",
                                "final_phi", "final_constancy_defect",
                                "iterations", "sharp_constant"}
        assert verdict["at_known_maximizer"] is True
        assert abs(verdict["final_phi"] - 2 * PI) <= 1e-4
        assert verdict["final_constancy_defect"] < 1e-3
        assert verdict["sharp_constant"] == 2 * PI
        assert payload["config"] == {"L": 8, "seed": 1234,
                                     "init": "perturbed-constant",
                                     "max_iter": 500, "tol": 1e-8}
        assert set(payload["trace"][0]) == {"iter", "phi", "grad_norm",
                                            "constancy_defect"}
        assert payload["trace"][-1]["iter"] == verdict["iterations"]

    def test_zonal_run_fails(self, capsys):
        # The odd invariant subspace caps the zonal start below 2*pi, so the
        # verdict must be an honest failure.
        code, out, _ = run_cli(capsys, ["search", "--init", "zonal",
                                        "--max-iter", "40"])
        payload = json.loads(out)
        assert code == 1
        assert payload["verdict"]["at_known_maximizer"] is False
        assert not payload["verdict"]["converged"]
        assert payload["verdict"]["final_phi"] < 2 * PI - 0.2

    def test_csv_trace(self, capsys):
        code, out, _ = run_cli(capsys, ["search", "--csv", "--max-iter", "5"])
        lines = out.splitlines()
        assert code in (0, 1)
        assert lines[0] == "iter,phi,grad_norm,constancy_defect"
        assert len(lines) == 7   # header + initial state + 5 accepted steps


class TestVerifyCommand:
    def test_json_run_passes(self, capsys):
        code, out, err = run_cli(capsys, SMALL_VERIFY)
        payload = json.loads(out)
        assert code == 0
        assert payload["overall_pass"] is True
        assert "timestamp" in payload
        assert payload["config"] == {"n_t": 24, "n_c": 18, "n_r": 12,
                                     "L": 4, "seed": 1234}
        assert "pass  sphere_gram_identity_max_dev" in err
        assert "FAIL" not in err

    def test_csv_run(self, capsys):
        code, out, _ = run_cli(capsys, SMALL_VERIFY + ["--csv"])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "name,expected,computed,tolerance,abs_or_rel,pass,wall_time"
        assert len(lines) == 18   # header + 17 checks
        for line in lines[1:]:
            assert line.split(",")[5] == "True"


class TestConvolutionCommand:
    def test_csv_profile(self, capsys):
        code, out, _ = run_cli(capsys, ["convolution", "--points", "10",
                                        "--n-c", "32"])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "r,conv_value_real,conv_value_imag,closed_form,abs_diff"
        assert len(lines) == 11
        for line in lines[1:]:
            r, real, imag, closed, diff = map(float, line.split(","))
            assert closed == pytest.approx(2 * PI / r, rel=1e-15)
            assert imag == 0.0
            assert diff <= 1e-10
        assert float(lines[-1].split(",")[0]) == 2.0

    def test_json_profile(self, capsys):
        code, out, _ = run_cli(capsys, ["convolution", "--points", "3", "--json"])
        payload = json.loads(out)
        assert code == 0
        assert len(payload["rows"]) == 3
        assert set(payload["rows"][0]) == {"r", "conv_value_real",
                                           "conv_value_imag", "closed_form",
                                           "abs_diff"}


class TestOutputFile:
    def test_out_matches_stdout(self, capsys, tmp_path):
        target = tmp_path / "spectrum.csv"
        code, out, _ = run_cli(capsys, ["spectrum", "--out", str(target)])
        assert code == 0
        assert out == ""
        _, stdout_text, _ = run_cli(capsys, ["spectrum"])
        assert target.read_text(encoding="utf-8") == stdout_text

    def test_unwritable_path_is_io_error(self, capsys, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("occupied")
        with pytest.raises(SystemExit) as exc_info:
            main(["spectrum", "--out", str(blocker / "x.csv")])
        assert exc_info.value.code == 3
        assert "cannot write" in capsys.readouterr().err


class TestUsageErrors:
    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["frobnicate"])
        assert exc_info.value.code == 2

    def test_json_csv_mutually_exclusive(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["spectrum", "--json", "--csv"])
        assert exc_info.value.code == 2

    def test_command_required(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main([])
        assert exc_info.value.code == 2
