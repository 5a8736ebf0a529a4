import json
import subprocess
import sys

import pytest

from cheegerlab import __version__
from cheegerlab.cli import RunConfig, run
from cheegerlab.graphs import cycle
from cheegerlab.io import InputError, dump_graph, dump_kernel
from cheegerlab.kernels import delta_kernel


def report(argv):
    code, text = run(argv)
    return code, json.loads(text) if text.startswith("{") else text


def test_analyze_cycle_and_complete():
    code, out = report(["analyze", "--graph", "cycle:8"])
    assert code == 0 and out["h"] == 0.5 and out["gap"] == 1.0
    assert out["meta"]["version"] == __version__ and out["meta"]["seed"] == 0
    _, out = report(["analyze", "--graph", "complete:4"])
    assert (out["h"], out["gap"], out["k_max"]) == (2.0, 4.0, 3)


def test_analyze_from_file(tmp_path):
    dump_graph(cycle(6), tmp_path / "g.json")
    code, out = report(["analyze", "--graph", str(tmp_path / "g.json")])
    assert code == 0 and out["h_fraction"] == "2/3"
    assert "graph" in out["meta"]["config"]["inputs"]


def test_malformed_json_exit_2(tmp_path):
    (tmp_path / "bad.json").write_text("{nope")
    code, out = report(["analyze", "--graph", str(tmp_path / "bad.json")])
    assert code == 2 and out["error"]["type"] == "InputError"


def test_cap_exceeded_exit_3():
    code, out = report(["analyze", "--graph", "cycle:30"])
    assert code == 3 and out["error"]["type"] == "cap_exceeded"
    code, out = report(["analyze", "--graph", "cycle:30", "--heuristic"])
    assert code == 0 and out["h_lower"] <= out["h_upper"] and not out["exact"]


def test_propa_examples():
    _, out = report(["propa", "--graph", "path:2", "--S", "0"])
    assert out["V_star"] == pytest.approx(2.0)
    _, out = report(["propa", "--graph", "cycle:6", "--S", "3"])
    assert out["V_star"] == pytest.approx(0.0, abs=1e-9)
    _, out = report(["propa", "--graph", "path:3", "--S", "1", "--symmetric"])
    assert out["V_star"] == pytest.approx(2 / 3) and out["certificate_gap"] <= 1e-7


def test_symmetrize_delta(tmp_path):
    g = cycle(5)
    dump_graph(g, tmp_path / "g.json")
    dump_kernel(delta_kernel(g), tmp_path / "k.json")
    code, out = report(["symmetrize", "--graph", str(tmp_path / "g.json"), "--kernel", str(tmp_path / "k.json")])
    assert code == 0 and out["symmetry_defect"] == 0 and out["unital_defect"] < 1e-12 and out["bound_check"]


def test_witness_report():
    code, out = report(["witness", "--graph", "margulis:3", "--recipe", "lazy_walk", "--S", "1"])
    assert code == 0 and out["witness"]["all_hold"]
    assert out["V_R1"] >= out["lower_bound"]["LB"]


def test_witness_refuses_asymmetric(tmp_path):
    code, out = report(["witness", "--graph", "path:3", "--kernel", str(tmp_path / "missing.json")])
    assert code == 2


def test_family_verdicts():
    _, out = report(["family", "--family", "margulis:2:5", "--S", "1"])
    assert out["incompatibility"]["obstructed"]
    _, out = report(["family", "--family", "cycle:8:24", "--S-divisor", "8"])
    assert not out["incompatibility"]["obstructed"]
    code, text = run(["family", "--family", "cycle:8:10", "--S", "1", "--format", "csv"])
    assert code == 0 and text.startswith("index,n,h,k,N_S,LB,V_achieved,verdict\n")


def test_family_spec_file(tmp_path):
    (tmp_path / "f.json").write_text(json.dumps({"generator": "random_regular", "range": [8, 10], "params": {"k": 4}, "seed": 3}))
    code, out = report(["family", "--family", str(tmp_path / "f.json"), "--S", "1"])
    assert code == 0 and out["sizes"] == [8, 9, 10]


def test_gen_round_trip(tmp_path):
    code, out = report(["gen", "--generator", "random_regular", "--n", "10", "--k", "3", "--seed", "2"])
    assert code == 0 and out["n"] == 10 and len(out["edges"]) == 15


def test_bad_config():
    with pytest.raises(InputError):
        RunConfig(command="propa", tol=0)
    code, _ = report(["propa", "--graph", "path:3"])
    assert code == 2


def test_byte_identical_and_timing(tmp_path):
    argv = ["family", "--family", "random_regular:8:12", "--k", "4", "--S", "1", "--seed", "9"]
    assert run(argv) == run(argv)
    _, timed = report(argv + ["--timing"])
    assert timed["meta"]["duration_s"] >= 0


def test_config_hash_tracks_inputs(tmp_path):
    dump_graph(cycle(6), tmp_path / "g.json")
    a = report(["analyze", "--graph", str(tmp_path / "g.json")])[1]["meta"]["config_hash"]
    dump_graph(cycle(7), tmp_path / "g.json")
    b = report(["analyze", "--graph", str(tmp_path / "g.json")])[1]["meta"]["config_hash"]
    assert a != b


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "cheegerlab", "analyze", "--graph", "cycle:8", "-o", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and json.loads(out.read_text())["h"] == 0.5
    assert "analyze" in proc.stderr
