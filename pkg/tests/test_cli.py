"""Command line interface: argument handling, exit codes, output files."""

import json
import os
import subprocess
import sys

import pytest

from nanosim.cli import (EXIT_CONFIG, EXIT_OK, EXIT_OUTPUT, EXIT_PROTOCOL,
                         main, parse_protocols, parse_seeds)
from nanosim.eventlog import read_log
from nanosim.metrics import read_csv

SMALL_INI = """\
[scenario]
nodes = 12
buckets = 2
sources_per_bucket = 1
sim_time = 0.5
packet_interval = 0.25
"""


@pytest.fixture
def small_ini(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text(SMALL_INI)
    return str(path)


class TestParsing:
    def test_seed_forms(self):
        assert parse_seeds("7") == [7]
        assert parse_seeds("1,4,9") == [1, 4, 9]
        assert parse_seeds(" 2 , 3 ") == [2, 3]
        assert parse_seeds("1..5") == [1, 2, 3, 4, 5]
        assert parse_seeds("4..4") == [4]
        assert parse_seeds(",") == []

    def test_backwards_range_rejected(self):
        with pytest.raises(ValueError):
            parse_seeds("9..1")

    def test_protocol_names_normalized(self):
        assert parse_protocols("rmrls,sfr") == ["RMRLS", "SFR"]
        assert parse_protocols("random-next-hop") == ["RANDOM_NEXT_HOP"]
        assert parse_protocols(" SFR , ") == ["SFR"]


class TestExitCodes:
    def test_missing_config_file(self, tmp_path, capsys):
        code = main(["run", "--config", str(tmp_path / "absent.cfg"),
                     "--out", str(tmp_path / "out")])
        assert code == EXIT_CONFIG
        assert "absent.cfg" in capsys.readouterr().err

    def test_unknown_config_key(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("[scenario]\nwarp_factor = 9\n")
        code = main(["run", "--config", str(bad), "--out", str(tmp_path / "o")])
        assert code == EXIT_CONFIG
        assert "warp_factor" in capsys.readouterr().err

    def test_bad_override(self, tmp_path, capsys):
        code = main(["run", "--override", "tau=purple",
                     "--out", str(tmp_path / "o")])
        assert code == EXIT_CONFIG
        assert "override" in capsys.readouterr().err

    def test_negative_sim_time(self, tmp_path, capsys):
        code = main(["run", "--sim-time", "-5", "--out", str(tmp_path / "o")])
        assert code == EXIT_CONFIG
        assert "sim time" in capsys.readouterr().err

    def test_unknown_protocol(self, tmp_path, capsys):
        code = main(["run", "--protocols", "RMRLS,WARP",
                     "--out", str(tmp_path / "o")])
        assert code == EXIT_PROTOCOL
        err = capsys.readouterr().err
        assert "WARP" in err and "RMRLS" in err

    def test_empty_protocols(self, tmp_path):
        assert main(["run", "--protocols", ",",
                     "--out", str(tmp_path / "o")]) == EXIT_PROTOCOL

    def test_bad_seeds(self, tmp_path, capsys):
        code = main(["run", "--seeds", "9..1", "--out", str(tmp_path / "o")])
        assert code == EXIT_CONFIG
        assert "seed" in capsys.readouterr().err
        assert main(["run", "--seeds", ",", "--out", str(tmp_path / "o")]) \
            == EXIT_CONFIG

    def test_unwritable_output(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("file, not a directory")
        code = main(["run", "--out", str(blocker / "out")])
        assert code == EXIT_OUTPUT
        assert "not writable" in capsys.readouterr().err


@pytest.fixture(scope="module")
def outcome(tmp_path_factory):
    ini = tmp_path_factory.mktemp("cfg") / "scenario.cfg"
    ini.write_text(SMALL_INI)
    out = tmp_path_factory.mktemp("results")
    code = main(["run", "--config", str(ini), "--out", str(out),
                 "--protocols", "RMRLS,SFR", "--seeds", "1..2"])
    return code, out


class TestRunOutputs:

    def test_exit_ok(self, outcome):
        assert outcome[0] == EXIT_OK

    def test_metrics_table(self, outcome):
        _, out = outcome
        rows = read_csv(out / "metrics.csv")
        assert [(r["protocol"], r["distance_bucket"]) for r in rows] == [
            ("RMRLS", 1), ("RMRLS", 2), ("SFR", 1), ("SFR", 2)]
        assert all(r["seeds"] == 2 for r in rows)

    def test_per_run_logs(self, outcome):
        _, out = outcome
        names = sorted(os.listdir(out / "runs"))
        assert names == ["RMRLS_seed1.ndjson", "RMRLS_seed2.ndjson",
                         "SFR_seed1.ndjson", "SFR_seed2.ndjson"]
        records = read_log(out / "runs" / "SFR_seed2.ndjson")
        assert records[0]["ev"] == "meta"
        assert records[0]["protocol"] == "SFR" and records[0]["seed"] == 2
        assert records[-1]["ev"] == "end"

    def test_manifest(self, outcome):
        _, out = outcome
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["protocols"] == ["RMRLS", "SFR"]
        assert manifest["seeds"] == [1, 2]
        assert manifest["config"]["nodes"] == 12
        assert len(manifest["config_digest"]) == 64
        assert len(manifest["runs"]) == 4
        for run in manifest["runs"]:
            assert (out / run["log"]).exists()
            assert run["generated"] >= run["delivered"] >= 0

    def test_overrides_reach_the_manifest(self, tmp_path, small_ini):
        out = tmp_path / "out"
        code = main(["run", "--config", small_ini, "--out", str(out),
                     "--protocols", "SFR", "--sim-time", "0.25",
                     "--override", "protocol.tau=3", "--override", "seed=9"])
        assert code == EXIT_OK
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["sim_time"] == 0.25
        assert manifest["config"]["tau"] == 3
        # the seed column is driven by --seeds, overrides notwithstanding
        assert manifest["runs"][0]["seed"] == 1

    def test_repeat_invocations_identical_bytes(self, tmp_path, small_ini):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main(["run", "--config", small_ini, "--out", str(out),
                         "--protocols", "RMRLS", "--seeds", "3"]) == EXIT_OK
            outs.append(out)
        a, b = outs
        assert (a / "metrics.csv").read_bytes() == (b / "metrics.csv").read_bytes()
        assert (a / "manifest.json").read_bytes() == (b / "manifest.json").read_bytes()
        assert (a / "runs" / "RMRLS_seed3.ndjson").read_bytes() == \
            (b / "runs" / "RMRLS_seed3.ndjson").read_bytes()


class TestEntryPoints:
    def test_module_invocation_help(self):
        result = subprocess.run(
            [sys.executable, "-m", "nanosim.cli", "run", "--help"],
            capture_output=True, text=True)
        assert result.returncode == 0
        assert "usage" in result.stdout
        assert "--protocols" in result.stdout

    def test_log_level_environment(self, tmp_path, small_ini):
        env = dict(os.environ, NANOSIM_LOG_LEVEL="info")
        result = subprocess.run(
            [sys.executable, "-m", "nanosim.cli", "run",
             "--config", small_ini, "--out", str(tmp_path / "out"),
             "--protocols", "SFR", "--seeds", "1"],
            capture_output=True, text=True, env=env)
        assert result.returncode == 0
        assert "running SFR seed 1" in result.stderr
        quiet = subprocess.run(
            [sys.executable, "-m", "nanosim.cli", "run",
             "--config", small_ini, "--out", str(tmp_path / "out2"),
             "--protocols", "SFR", "--seeds", "1"],
            capture_output=True, text=True, env=dict(os.environ))
        assert quiet.returncode == 0
        assert "running SFR" not in quiet.stderr
