import json
import subprocess
import sys

import numpy as np
import pytest

import qcorr as q
from qcorr.cli import main

import helpers


def run_cli(*args, capsys):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


class TestSample:
    def test_writes_files_with_seeds(self, tmp_path, capsys):
        code, out, _ = run_cli(
            "sample", "--dims", "2,2,2", "--count", "2", "--seed", "42",
            "--out", str(tmp_path / "states"), capsys=capsys,
        )
        assert code == 0
        paths = out.strip().splitlines()
        assert len(paths) == 2
        doc = json.loads((tmp_path / "states" / "state_0000.json").read_text())
        assert doc["dims"] == [2, 2, 2]
        assert doc["labels"] == ["A", "B", "C"]
        assert doc["kind"] == "pure"
        assert "seed" in doc
        amp = np.array([complex(re, im) for re, im in doc["data"]])
        assert abs(np.linalg.norm(amp) - 1) < 1e-9

    def test_byte_identical_reruns(self, tmp_path, capsys):
        run_cli("sample", "--count", "1", "--seed", "42", "--out", str(tmp_path / "a"), capsys=capsys)
        run_cli("sample", "--count", "1", "--seed", "42", "--out", str(tmp_path / "b"), capsys=capsys)
        a = (tmp_path / "a" / "state_0000.json").read_bytes()
        b = (tmp_path / "b" / "state_0000.json").read_bytes()
        assert a == b


class TestCompute:
    def test_bell_conditional_entropy(self, tmp_path, capsys, bell):
        path = tmp_path / "bell.json"
        q.save_state(bell, path)
        code, out, _ = run_cli(
            "compute", "--state", str(path), "--quantity", "conditional-entropy A|B",
            capsys=capsys,
        )
        assert code == 0
        value_line, json_line = out.strip().splitlines()
        assert abs(float(value_line) + 1.0) < 1e-9
        doc = json.loads(json_line)
        assert doc["value"] == float(value_line)
        assert doc["route"] == "spectrum"

    def test_ghz_discord_closed(self, tmp_path, capsys, ghz):
        path = tmp_path / "ghz.json"
        q.save_state(ghz, path)
        code, out, _ = run_cli(
            "compute", "--state", str(path), "--quantity", "discord A|C", capsys=capsys
        )
        assert code == 0
        doc = json.loads(out.strip().splitlines()[1])
        assert doc["route"] == "koashi-winter"
        assert abs(doc["value"]) < 1e-6

    def test_round_trip_matches_library(self, tmp_path, capsys):
        from qcorr.harness import compute_quantity, sample_state

        code, out, _ = run_cli(
            "sample", "--count", "1", "--seed", "11", "--out", str(tmp_path), capsys=capsys
        )
        assert code == 0
        state_path = out.strip().splitlines()[0]
        code, out, _ = run_cli(
            "compute", "--state", state_path, "--quantity", "mutual-information A:B",
            capsys=capsys,
        )
        assert code == 0
        cli_value = float(out.strip().splitlines()[0])
        _, psi = sample_state(11, 0, (2, 2, 2))
        lib_value = compute_quantity(psi, "mutual-information A:B")["value"]
        assert cli_value == lib_value

    def test_malformed_file_exit_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{]")
        code, _, err = run_cli(
            "compute", "--state", str(path), "--quantity", "entropy A", capsys=capsys
        )
        assert code == 2
        assert err

    def test_dimension_error_exit_3(self, tmp_path, capsys, bell):
        path = tmp_path / "bell.json"
        q.save_state(bell, path)
        code, _, err = run_cli(
            "compute", "--state", str(path), "--quantity", "concurrence A:Z", capsys=capsys
        )
        assert code == 3
        assert err


class TestVerify:
    def test_eq5_closed_small(self, tmp_path, capsys):
        out_path = tmp_path / "rep.json"
        code, out, err = run_cli(
            "verify", "--identity", "eq5", "--samples", "3", "--seed", "7",
            "--out", str(out_path), capsys=capsys,
        )
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["identity"] == "eq5"
        assert doc["aggregate"]["pass_count"] == 3
        assert "eq5" in err

    def test_stdout_json_when_no_out(self, capsys):
        code, out, _ = run_cli(
            "verify", "--identity", "eq5", "--samples", "2", "--seed", "3", capsys=capsys
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["samples"] == 2

    def test_csv_format(self, tmp_path, capsys):
        out_path = tmp_path / "rep.csv"
        code, _, _ = run_cli(
            "verify", "--identity", "eq5", "--samples", "2", "--seed", "3",
            "--out", str(out_path), "--format", "csv", capsys=capsys,
        )
        assert code == 0
        header = out_path.read_text().splitlines()[0]
        assert header == "identity,sample_index,state_seed,lhs,rhs,residual,route_lhs,route_rhs,converged"

    def test_io_error_exit_4(self, tmp_path, capsys):
        code, _, err = run_cli(
            "verify", "--identity", "eq5", "--samples", "1", "--seed", "3",
            "--out", str(tmp_path / "no" / "dir" / "rep.json"), capsys=capsys,
        )
        assert code == 4
        assert err


def test_entry_point_subprocess(tmp_path):
    # the installed console script stays wired up
    res = subprocess.run(
        [sys.executable, "-m", "qcorr.cli", "verify", "--identity", "eq5",
         "--samples", "2", "--seed", "1"],
        capture_output=True, text=True, timeout=600,
    )
    assert res.returncode == 0, res.stderr
    json.loads(res.stdout)
