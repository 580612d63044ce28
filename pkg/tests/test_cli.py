"""Command line interface: exit codes, JSON reports, determinism."""

import json
import subprocess
import sys

import pytest

from fusionhom.groups import cyclic
from fusionhom.tube import tube_from_group, tube_to_text


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "fusionhom.cli", *args],
        capture_output=True, text=True)
    return proc


def run_json(*args):
    proc = run_cli(*args, "--json")
    assert proc.stdout, proc.stderr
    return proc.returncode, json.loads(proc.stdout)


@pytest.fixture
def tube_file(tmp_path):
    path = tmp_path / "z2.tube"
    path.write_text(tube_to_text(tube_from_group(cyclic(2))))
    return str(path)


@pytest.fixture
def broken_tube_file(tmp_path):
    txt = tube_to_text(tube_from_group(cyclic(2)))
    bad = txt.replace("\na1 a1 1\n", "\na1 a0 1\n")
    assert bad != txt
    path = tmp_path / "broken.tube"
    path.write_text(bad)
    return str(path)


def test_report_envelope():
    code, report = run_json("betti", "--fuss-catalan", "5", "5")
    assert code == 0
    assert report["command"] == "betti"
    assert set(report) == {"command", "version", "inputs", "results",
                           "warnings", "timing"}
    assert "runtime_ms" in report["timing"]
    assert report["results"]["profile"][1]["exact"] == "2/3"


def test_betti_human_output_prints_exact_value():
    proc = run_cli("betti", "--fuss-catalan", "5", "5")
    assert proc.returncode == 0
    assert "2/3" in proc.stdout


def test_tube_group_verify_and_homology():
    code, report = run_json("tube", "--group", "S3", "--verify",
                            "--homology", "2")
    assert code == 0
    assert report["results"]["all_passed"]
    assert report["results"]["dim"] == 36
    assert report["results"]["homology"]["dims"] == [1, 0, 0]


def test_tube_file_input(tube_file):
    code, report = run_json("tube", "--file", tube_file, "--verify")
    assert code == 0
    assert report["inputs"]["files"]


def test_corrupt_tube_file_fails_verification(broken_tube_file):
    proc = run_cli("tube", "--file", broken_tube_file, "--verify")
    assert proc.returncode == 2


def test_verify_all_names_the_violation(broken_tube_file):
    proc = run_cli("verify-all", "--tube-file", broken_tube_file)
    assert proc.returncode == 2
    assert "FAIL" in proc.stdout
    assert "InvariantViolation" in proc.stdout


def test_unknown_group_is_an_input_error():
    proc = run_cli("tube", "--group", "Q8", "--verify")
    assert proc.returncode == 1


def test_two_input_sources_rejected(tube_file):
    proc = run_cli("tube", "--group", "S3", "--file", tube_file)
    assert proc.returncode == 1


def test_chain_cap_is_inconclusive():
    proc = run_cli("homology-tube", "--group", "S3", "--degree", "2",
                   "--chain-cap", "10")
    assert proc.returncode == 3


def test_homology_tlj_example():
    code, report = run_json("homology-tlj", "--mode", "unshaded",
                            "--h1", "K=6", "--h2", "N=4", "--margin", "2")
    assert code == 0
    assert report["results"]["h1"]["contained"]
    assert report["results"]["h2"]["contained"]


def test_flag_spellings_agree():
    _, a = run_json("homology-tlj", "--h1", "6")
    _, b = run_json("homology-tlj", "--h1", "K=6")
    assert a["results"] == b["results"]
    assert a["inputs"]["digest"] == b["inputs"]["digest"]


def test_results_are_deterministic():
    _, a = run_json("homology-tlj", "--h0", "4", "--h1", "5")
    _, b = run_json("homology-tlj", "--h0", "4", "--h1", "5")
    assert a["results"] == b["results"]
    assert a["inputs"] == b["inputs"]


def test_amenability_kesten_flat_ladder():
    code, report = run_json("amenability", "--check", "kesten",
                            "--ladder-delta", "2.0", "--window", "4096")
    assert code == 0
    assert report["results"]["kesten"]["amenable"] is True


def test_amenability_unstable_window_is_inconclusive():
    proc = run_cli("amenability", "--check", "kesten",
                   "--ladder-delta", "2.0", "--window", "16")
    assert proc.returncode == 3


def test_amenability_folner_on_graph_file(tmp_path):
    path = tmp_path / "tri.graph"
    path.write_text("vertex: a 1.0\nvertex: b 1.0\nvertex: c 1.0\n"
                    "generators: b c\nedge: a b\nedge: b c\nedge: a c\n")
    code, report = run_json("amenability", "--check", "folner",
                            "--graph", str(path), "--epsilon", "0.5",
                            "--max-size", "5")
    assert code == 0
    assert report["results"]["folner"]["found"]


def test_kesten_needs_a_ring_not_a_graph(tmp_path):
    path = tmp_path / "tri.graph"
    path.write_text("vertex: a 1.0\ngenerators: a\nedge: a a\n")
    proc = run_cli("amenability", "--check", "kesten", "--graph", str(path))
    assert proc.returncode == 1


def test_out_writes_the_same_report(tmp_path):
    out = tmp_path / "report.json"
    code, shown = run_json("betti", "--tlj", "7", "--out", str(out))
    assert code == 0
    stored = json.loads(out.read_text())
    assert stored["results"] == shown["results"]


def test_fusion_ladder_summary():
    code, report = run_json("fusion", "--ladder", "8", "--delta", "2.0",
                            "--verify")
    assert code == 0
    assert report["results"]["verified"]
    assert report["results"]["labels"] == 8
