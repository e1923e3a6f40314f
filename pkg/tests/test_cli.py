import math
import subprocess
import sys

import pytest

from gaussbell.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _data_rows(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


class TestBellCommand:
    def test_unbinned_closed_form(self, capsys):
        code, out, _ = run_cli(["bell", "--op", "unbinned", "--r", "1", "--t", "0.5"], capsys)
        assert code == 0
        header, rows = _data_rows(out)
        assert header == ["format_version", "b", "theta2", "szz", "sxx", "est_error"]
        vals = dict(zip(header, rows[0]))
        expected = 2 * math.hypot(
            math.tanh(1.0) ** 2, (2 / math.pi) * math.atan(math.sinh(2.0))
        )
        assert float(vals["b"]) == pytest.approx(expected, rel=1e-15)
        assert vals["format_version"] == "1"

    def test_binned_point(self, capsys):
        code, out, _ = run_cli(
            ["bell", "--op", "binned", "--r", "3", "--t", "1e-6", "--l", "1"], capsys
        )
        assert code == 0
        _, rows = _data_rows(out)
        b = float(rows[0][1])
        assert b > 2.5  # inside the finite-bin bump

    def test_missing_l_is_usage_error(self, capsys):
        code, _, err = run_cli(["bell", "--op", "binned", "--r", "1"], capsys)
        assert code == 1
        assert "requires --l" in err

    def test_missing_op_is_usage_error(self, capsys):
        code, _, _ = run_cli(["bell", "--r", "1"], capsys)
        assert code == 1

    def test_unknown_flag_exits_one(self, capsys):
        code, _, _ = run_cli(["bell", "--frobnicate"], capsys)
        assert code == 1

    def test_invalid_parameter_exits_one(self, capsys):
        code, _, err = run_cli(["bell", "--op", "unbinned", "--r", "-1"], capsys)
        assert code == 1
        assert "invalid input" in err

    def test_unreachable_tolerance_exits_two(self, capsys):
        code, _, err = run_cli(
            ["bell", "--op", "binned", "--r", "1", "--l", "1",
             "--tail-tol", "1e-16"], capsys
        )
        assert code == 2
        assert "accuracy" in err


class TestScanCommand:
    def test_b_vs_l_deterministic_bytes(self, tmp_path, capsys):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["scan", "b-vs-l", "--r", "1,3", "--t", "1e-6",
                "--l-grid=-1:1:9", "--tail-tol", "1e-8"]
        assert run_cli(argv + ["--out", str(out1)], capsys)[0] == 0
        assert run_cli(argv + ["--out", str(out2)], capsys)[0] == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_threads_do_not_change_bytes(self, tmp_path, capsys):
        base = ["scan", "b-vs-l", "--r", "2", "--t", "0.2",
                "--l-grid=-1:1:7", "--tail-tol", "1e-8"]
        out1, out4 = tmp_path / "t1.csv", tmp_path / "t4.csv"
        assert run_cli(base + ["--threads", "1", "--out", str(out1)], capsys)[0] == 0
        assert run_cli(base + ["--threads", "4", "--out", str(out4)], capsys)[0] == 0
        assert out1.read_bytes() == out4.read_bytes()

    def test_env_var_thread_fallback(self, tmp_path, capsys, monkeypatch):
        out_env, out_flag = tmp_path / "env.csv", tmp_path / "flag.csv"
        argv = ["scan", "violation-map", "--op", "unbinned", "--r", "0.5,1",
                "--t", "0,0.5"]
        monkeypatch.setenv("GAUSSBELL_THREADS", "3")
        assert run_cli(argv + ["--out", str(out_env)], capsys)[0] == 0
        monkeypatch.delenv("GAUSSBELL_THREADS")
        assert run_cli(argv + ["--threads", "1", "--out", str(out_flag)],
                       capsys)[0] == 0
        assert out_env.read_bytes() == out_flag.read_bytes()

    def test_bad_env_var_thread_count_rejected(self, capsys, monkeypatch):
        monkeypatch.setenv("GAUSSBELL_THREADS", "0")
        code, _, _ = run_cli(
            ["scan", "en-map", "--r", "1", "--t", "0"], capsys
        )
        assert code == 1

    def test_violation_map_unbinned(self, capsys):
        code, out, _ = run_cli(
            ["scan", "violation-map", "--op", "unbinned", "--r", "0.5,1",
             "--t", "0,1"], capsys
        )
        assert code == 0
        header, rows = _data_rows(out)
        assert header[1:] == ["r", "t", "b_opt", "l_opt", "violated",
                              "est_error", "status"]
        assert all(row[4] == "nan" for row in rows)

    def test_contours(self, capsys):
        code, out, _ = run_cli(
            ["scan", "contours", "--levels", "1,2", "--r", "0.5,1,2,3",
             "--t", "0,0.5,1", "--l-grid=-2:2:17", "--tail-tol", "1e-7"],
            capsys,
        )
        assert code == 0
        header, rows = _data_rows(out)
        assert header[1:] == ["level", "t", "r", "b_opt", "l_opt", "reached"]
        assert len(rows) == 6

    def test_en_map_values(self, capsys):
        code, out, _ = run_cli(
            ["scan", "en-map", "--r", "1", "--t", "0"], capsys
        )
        assert code == 0
        _, rows = _data_rows(out)
        assert float(rows[0][3]) == pytest.approx(2 / math.log(2), abs=1e-9)

    def test_missing_grid_is_usage_error(self, capsys):
        code, _, _ = run_cli(["scan", "b-vs-l", "--t", "0"], capsys)
        assert code == 1

    def test_unwritable_output_exits_one(self, capsys):
        code, _, err = run_cli(
            ["scan", "en-map", "--r", "1", "--t", "0",
             "--out", "/nonexistent-dir/x.csv"], capsys
        )
        assert code == 1
        assert "cannot write" in err


class TestConfigFile:
    def test_config_supplies_defaults_and_flags_win(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("r = 1.0\nt = 0.5\nop = unbinned\n")
        code, out, _ = run_cli(["bell", "--config", str(cfg)], capsys)
        assert code == 0
        assert "# config r=1" in out
        # explicit flag overrides the file
        code, out2, _ = run_cli(
            ["bell", "--config", str(cfg), "--r", "2"], capsys
        )
        assert code == 0
        assert "# config r=2" in out2

    def test_bad_config_line_exits_one(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("this is not a key value pair\n")
        code, _, _ = run_cli(["bell", "--config", str(cfg), "--op",
                              "unbinned", "--r", "1"], capsys)
        assert code == 1

    def test_missing_config_exits_one(self, capsys):
        code, _, _ = run_cli(["bell", "--config", "/no/such/file",
                              "--op", "unbinned", "--r", "1"], capsys)
        assert code == 1


class TestSelftest:
    def test_quick_passes_and_is_deterministic(self, tmp_path, capsys):
        out1, out2 = tmp_path / "s1.txt", tmp_path / "s2.txt"
        argv = ["selftest", "--quick", "--seed", "42"]
        assert run_cli(argv + ["--out", str(out1)], capsys)[0] == 0
        assert run_cli(argv + ["--out", str(out2)], capsys)[0] == 0
        assert out1.read_bytes() == out2.read_bytes()
        text = out1.read_text()
        assert "PASS" in text
        assert "FAIL" not in text


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gaussbell.cli", "bell", "--op", "unbinned",
         "--r", "0.5", "--t", "0"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "format_version" in proc.stdout
