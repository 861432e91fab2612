import json
import subprocess
import sys

import pytest

from qdicla.cli import main, read_config, read_vector_file
from qdicla.generators import AdderConfig, generate
from qdicla.netlist import emit_netlist


def run_cli(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestConfigPlumbing:
    def test_read_config(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# defaults\narch = rca\nwidth=8\nhybrid-rca = 4\n")
        assert read_config(str(path)) == {
            "arch": "rca", "width": "8", "hybrid_rca": "4"}

    def test_config_rejects_bare_words(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("exhaustive\n")
        with pytest.raises(ValueError):
            read_config(str(path))

    def test_flags_beat_config(self, capsys, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("arch = rca\nwidth = 4\nseed = 3\n")
        rc, out, _ = run_cli(capsys, "verify", "--config", str(path),
                             "--width", "8", "--exhaustive")
        assert rc == 0
        assert "design rca8" in out
        assert "seed=3" in out.splitlines()[0]

    def test_vector_file(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("1 2\n0xF 0x1 1  # wrap\n")
        assert read_vector_file(str(path)) == [(1, 2, 0), (15, 1, 1)]
        path.write_text("1 2 3\n")
        with pytest.raises(ValueError):
            read_vector_file(str(path))


class TestGen:
    def test_netlist_on_stdout(self, capsys):
        rc, out, err = run_cli(capsys, "gen", "--arch", "scbclg", "--alias")
        assert rc == 0
        assert out == emit_netlist(generate(
            AdderConfig(arch="scbclg", alias=True)))
        assert "scbclg4_alias: 33 gates, 318 transistors" in err

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "adder.net"
        rc, out, _ = run_cli(capsys, "gen", "--arch", "rca", "--width", "4",
                             "--out", str(path))
        assert rc == 0
        assert path.read_text() == emit_netlist(generate(
            AdderConfig(arch="rca", width=4)))
        assert out.startswith("# qdicla gen ")
        assert "seed=0" in out.splitlines()[0]
        assert "rca4: 24 gates, 240 transistors, depth 5" in out
        assert "  AO22 x24" in out

    def test_alias_sections_present(self, capsys):
        rc, out, _ = run_cli(capsys, "gen", "--arch", "scbcla", "--width",
                             "32", "--section", "4", "--alias")
        assert rc == 0
        assert out.splitlines()[0] == "module scbcla32_alias"
        assert sum(" ALIAS " in line for line in out.splitlines()) == 16
        assert any(" s7.alias1 " in line for line in out.splitlines())

    def test_bad_width_is_usage_error(self, capsys):
        rc, _, err = run_cli(capsys, "gen", "--arch", "scbcla", "--width",
                             "30", "--section", "4")
        assert rc == 2
        assert err.startswith("error:")

    def test_hybrid_width_must_match_section(self, capsys):
        rc, _, err = run_cli(capsys, "gen", "--arch", "scbcla",
                             "--hybrid-rca", "8")
        assert rc == 2
        assert "section" in err

    def test_hybrid_flag_accepted(self, capsys):
        rc, out, _ = run_cli(capsys, "gen", "--arch", "scbcla", "--width",
                             "32", "--section", "4", "--alias",
                             "--hybrid-rca", "4")
        assert rc == 0
        assert out.splitlines()[0] == "module scbcla32_alias_hybrid4"


class TestSim:
    def test_single_vector(self, capsys):
        rc, out, _ = run_cli(capsys, "sim", "--arch", "rca", "--width", "4",
                             "--a", "3", "--b", "5", "--cin", "1")
        assert rc == 0
        lines = out.splitlines()
        assert lines[1].split() == ["a", "b", "cin", "status", "sum", "cout",
                                    "latency", "rtz_time", "events"]
        row = lines[2].split()
        assert row[:7] == ["3", "5", "1", "ok", "9", "0", "4"]
        assert "# 1 vectors, 0 failures" in out

    def test_vector_file_rows(self, capsys, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("1 2\n15 1 1\n")
        rc, out, _ = run_cli(capsys, "sim", "--arch", "rca", "--width", "4",
                             "--vectors", str(path))
        assert rc == 0
        rows = [line.split() for line in out.splitlines()[2:4]]
        assert rows[0][3:6] == ["ok", "3", "0"]
        assert rows[1][3:6] == ["ok", "1", "1"]

    def test_random_delays_deterministic(self, capsys):
        argv = ("sim", "--arch", "scbclg", "--alias", "--random", "5",
                "--seed", "11", "--delays", "random", "--watch-races")
        rc1, out1, _ = run_cli(capsys, *argv)
        rc2, out2, _ = run_cli(capsys, *argv)
        assert rc1 == rc2 == 0
        assert out1 == out2

    def test_structured(self, capsys):
        rc, out, _ = run_cli(capsys, "sim", "--arch", "rca", "--width", "8",
                             "--random", "4", "--seed", "2", "--format",
                             "structured")
        assert rc == 0
        payload = json.loads(out)
        assert payload["seed"] == 2
        assert payload["failures"] == 0
        assert len(payload["records"]) == 4

    def test_trace_single_vector_only(self, capsys):
        rc, _, err = run_cli(capsys, "sim", "--arch", "rca", "--width", "4",
                             "--random", "2", "--trace")
        assert rc == 2
        assert "trace" in err

    def test_trace_output(self, capsys):
        rc, out, _ = run_cli(capsys, "sim", "--arch", "fa", "--a", "1",
                             "--b", "1", "--trace")
        assert rc == 0
        assert "# trace data" in out
        assert "# trace rtz" in out
        assert any(line.endswith("cout.1 1") for line in out.splitlines())

    def test_needs_vectors(self, capsys):
        rc, _, err = run_cli(capsys, "sim", "--arch", "rca", "--width", "4")
        assert rc == 2
        assert "vectors" in err

    def test_monitor_block_rejected(self, capsys):
        rc, _, err = run_cli(capsys, "sim", "--arch", "cd", "--width", "4",
                             "--a", "1", "--b", "1")
        assert rc == 2
        assert "operand" in err


class TestVerify:
    def test_exhaustive_with_alias_agreement(self, capsys):
        rc, out, _ = run_cli(capsys, "verify", "--arch", "scbclg",
                             "--alias", "--exhaustive")
        assert rc == 0
        assert "exhaustive: 512 cases, 0 failures PASS" in out
        assert "alias agreement: 512 cases, 0 failures PASS" in out

    def test_exhaustive_width_8(self, capsys):
        rc, out, _ = run_cli(capsys, "verify", "--arch", "rca", "--width",
                             "8", "--exhaustive")
        assert rc == 0
        assert "exhaustive: 131072 cases, 0 failures PASS" in out

    def test_fuzz_reproducible(self, capsys):
        argv = ("verify", "--arch", "scbcla", "--width", "32", "--alias",
                "--fuzz", "20", "--seed", "7")
        rc1, out1, _ = run_cli(capsys, *argv)
        rc2, out2, _ = run_cli(capsys, *argv)
        assert rc1 == rc2 == 0
        assert out1 == out2
        assert "fuzz: 40 cases, 0 failures PASS" in out1

    def test_latency_suite(self, capsys):
        rc, out, _ = run_cli(capsys, "verify", "--arch", "rca", "--width",
                             "4", "--latency", "--random", "50")
        assert rc == 0
        assert "latency agreement" in out
        assert "static 5 simulated 5" in out

    def test_default_suite_small_width(self, capsys):
        rc, out, _ = run_cli(capsys, "verify", "--arch", "rca", "--width",
                             "4")
        assert rc == 0
        assert "exhaustive: 512 cases" in out

    def test_csv(self, capsys):
        rc, out, _ = run_cli(capsys, "verify", "--arch", "rca", "--width",
                             "4", "--exhaustive", "--format", "csv")
        assert rc == 0
        lines = out.splitlines()
        assert lines[1] == "suite,cases,failures,status,detail"
        assert lines[2].startswith("exhaustive,512,0,PASS")


class TestBench:
    def test_group4_rows_and_ordering(self, capsys):
        rc, out, _ = run_cli(capsys, "bench", "--group4", "--random", "20")
        assert rc == 0
        lines = out.splitlines()
        rows = [line.split() for line in lines[2:6]]
        assert [r[1] for r in rows] == ["scbcla", "scbcla_hybrid",
                                        "scbcla_alias",
                                        "scbcla_alias_hybrid"]
        assert [r[5] for r in rows] == ["22", "21", "16", "15"]
        assert lines[6] == ("latency ordering: scbcla_alias_hybrid < "
                            "scbcla_alias < scbcla_hybrid < scbcla PASS")

    def test_group3_rows(self, capsys):
        rc, out, _ = run_cli(capsys, "bench", "--group3", "--random", "20")
        assert rc == 0
        lines = out.splitlines()
        assert lines[2].split()[:2] == ["group3", "rcla"]
        assert lines[2].split()[5] == "23"
        assert lines[3].split()[5] == "22"
        assert "latency ordering" not in out

    def test_csv_four_rows(self, capsys):
        rc, out, _ = run_cli(capsys, "bench", "--group4", "--random", "20",
                             "--format", "csv")
        assert rc == 0
        lines = out.splitlines()
        assert len(lines) == 6
        assert lines[2].startswith("group4,scbcla,424,4144,22,22,1744.48")

    def test_deterministic(self, capsys):
        rc1, out1, _ = run_cli(capsys, "bench", "--group4", "--random", "20")
        rc2, out2, _ = run_cli(capsys, "bench", "--group4", "--random", "20")
        assert out1 == out2


class TestReport:
    def test_all_pass(self, capsys):
        rc, out, _ = run_cli(capsys, "report")
        assert rc == 0
        assert "alias latency reduction 24.6% PASS" in out
        assert "latency reduction against recursive CLA 16% PASS" in out
        assert "FAIL" not in out
        # 3 identities + 11 claims + overhead + ordering + ratio
        assert sum("PASS" in line for line in out.splitlines()) == 17

    def test_structured(self, capsys):
        rc, out, _ = run_cli(capsys, "report", "--format", "structured")
        assert rc == 0
        payload = json.loads(out)
        assert payload["ok"] is True
        assert len(payload["entries"]) == 17

    def test_doctored_reference_fails(self, capsys, tmp_path):
        from importlib.resources import files
        text = (files("qdicla") / "data/reference_adders.txt").read_text()
        bad = text.replace("2178      3.13", "2178      9.99")
        assert bad != text
        path = tmp_path / "ref.txt"
        path.write_text(bad)
        rc, out, _ = run_cli(capsys, "report", "--reference", str(path))
        assert rc == 1
        assert "FAIL" in out

    def test_missing_reference(self, capsys):
        rc, _, err = run_cli(capsys, "report", "--reference", "/no/such")
        assert rc == 2
        assert err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qdicla", "gen", "--arch",
                           "fa"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "module fa"
