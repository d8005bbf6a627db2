import json
import shutil
import subprocess
import sys

import pytest

from linkbalance import cli
from linkbalance.topology import read_flows, read_topology, read_weights

from conftest import FIXTURE_OPTIMA, FIXTURES


@pytest.fixture
def fixture_files(tmp_path):
    for kind in ("topology", "flows"):
        shutil.copy(FIXTURES / f"n4e5_b_{kind}.json", tmp_path / f"{kind}.json")
    return tmp_path / "topology.json", tmp_path / "flows.json"


def test_optimize_matches_bruteforce(fixture_files, tmp_path, capsys):
    topo, flows = fixture_files
    out = tmp_path / "w.json"
    assert cli.main(["optimize", "--topology", str(topo), "--flows", str(flows), "--weight-max", "5",
                     "--out", str(out)]) == 0
    summary = capsys.readouterr().err
    assert f"after_max_load={FIXTURE_OPTIMA['n4e5_b'][0]}" in summary
    g = read_topology(topo)
    w = read_weights(out, g, 5)
    from linkbalance.routing import evaluate_fitness

    assert evaluate_fitness(g, w, read_flows(flows, g)).max_load == FIXTURE_OPTIMA["n4e5_b"][0]

    assert cli.main(["bruteforce", "--topology", str(topo), "--flows", str(flows), "--weight-max", "5"]) == 0
    assert capsys.readouterr().out.startswith(f"optimum={FIXTURE_OPTIMA['n4e5_b'][0]} ")


def test_optimize_empty_flows(fixture_files, capsys):
    topo, flows = fixture_files
    flows.write_text("[]")
    assert cli.main(["optimize", "--topology", str(topo), "--flows", str(flows)]) == 0
    assert "before_max_load=0 after_max_load=0" in capsys.readouterr().err


def test_optimize_unreachable(tmp_path, capsys):
    (tmp_path / "t.json").write_text(json.dumps({"nodes": 3, "edges": [[0, 1], [1, 2]]}))
    (tmp_path / "f.json").write_text(json.dumps([{"src": 2, "dst": 0, "units": 1}]))
    code = cli.main(["optimize", "--topology", str(tmp_path / "t.json"), "--flows", str(tmp_path / "f.json")])
    assert code == cli.EXIT_INPUT
    assert "from 2 to 0" in capsys.readouterr().err


def test_bruteforce_budget_exit(tmp_path, capsys):
    topo, flows = tmp_path / "t.json", tmp_path / "f.json"
    assert cli.main(["generate", "--profile", "n10e39", "--topology", str(topo), "--flows", str(flows)]) == 0
    code = cli.main(["bruteforce", "--topology", str(topo), "--flows", str(flows), "--weight-max", "9"])
    assert code == cli.EXIT_BUDGET
    assert "budget" in capsys.readouterr().err


def test_single_edge_bruteforce(tmp_path, capsys):
    (tmp_path / "t.json").write_text(json.dumps({"nodes": 2, "edges": [[0, 1]]}))
    (tmp_path / "f.json").write_text(json.dumps([{"src": 0, "dst": 1, "units": 1}]))
    assert cli.main(["bruteforce", "--topology", str(tmp_path / "t.json"), "--flows", str(tmp_path / "f.json")]) == 0
    assert capsys.readouterr().out == "optimum=1 weights=[1]\n"


def test_generate_profiles(tmp_path):
    topo = tmp_path / "t.json"
    assert cli.main(["generate", "--profile", "n4e5", "--topology", str(topo), "--flows", str(tmp_path / "f.json")]) == 0
    g = read_topology(topo)
    assert (g.node_count, g.edge_count) == (4, 5)
    assert len(read_flows(tmp_path / "f.json", g)) == 5
    assert cli.main(["generate", "--nodes", "6", "--edges", "6", "--flow-count", "3", "--topology", str(topo)]) == 0
    assert read_topology(topo).edge_count == 6
    assert cli.main(["generate", "--nodes", "6", "--edges", "40", "--topology", str(topo)]) == cli.EXIT_INPUT


def test_malformed_input_exit(tmp_path):
    (tmp_path / "t.json").write_text("{")
    (tmp_path / "f.json").write_text("[]")
    assert cli.main(["optimize", "--topology", str(tmp_path / "t.json"), "--flows", str(tmp_path / "f.json")]) == cli.EXIT_INPUT
    assert cli.main(["optimize", "--topology", str(tmp_path / "none.json"), "--flows", "x"]) == cli.EXIT_INPUT


def test_bad_ga_flags_exit(fixture_files):
    topo, flows = fixture_files
    assert cli.main(["optimize", "--topology", str(topo), "--flows", str(flows), "--pop-size", "7"]) == cli.EXIT_INPUT


def test_timing_zero_runs(capsys):
    assert cli.main(["timing", "--profiles", "n4e5", "--runs", "0"]) == cli.EXIT_INPUT
    assert "at least one run" in capsys.readouterr().err


def test_compare_byte_stable(tmp_path):
    args = ["compare", "--profile", "n5e11", "--runs", "1", "--seed", "4", "--iterations", "3", "--generations", "20",
            "--stagnation", "10"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b)]) == 0
    from linkbalance.bench import strip_timing

    assert strip_timing(a.read_text()) == strip_timing(b.read_text())
    assert a.read_bytes().count(b"\r") == 0


def test_effectiveness_csv_to_stdout(capsys):
    assert cli.main(["effectiveness", "--runs", "1", "--flow-counts", "0", "--generations", "5", "--stagnation", "5"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("row_type,experiment,")
    assert "effectiveness=NA" in captured.err


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "linkbalance.cli", "generate", "--profile", "n4e5", "--topology", str(tmp_path / "t.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "n4e5" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "linkbalance.cli", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2
