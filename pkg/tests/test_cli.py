import json
import shutil
import subprocess
import sys

import pytest

from nestedpart.cli import SCHEMA, level_counts, main
from nestedpart.partition import PartitionType
from nestedpart.predicates import step_witness
from nestedpart.wreath import group_generators


def run_json(capsys, *argv):
    code = main([*argv, "--json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_level_counts():
    assert level_counts(PartitionType((2, 2))) == [64, 32, 8]
    assert level_counts(PartitionType((3,))) == [27, 6]


def test_enumerate_22(capsys):
    code, rep = run_json(capsys, "enumerate", "--type", "2,2")
    assert code == 0
    assert rep["schema"] == SCHEMA
    assert (rep["total"], rep["automorphisms"]) == (64, 8)
    assert rep["levels"] == {"P_1": 32, "P_2": 8}
    assert rep["strata"] == {"0": 32, "1": 24, "2": 8}
    assert all(rep["checks"].values())


@pytest.mark.parametrize("t,total", [("3", 27), ("1", 1), ("1,2", 4), ("3,3", 3**3 * 27**3)])
def test_enumerate_totals(capsys, t, total):
    code, rep = run_json(capsys, "enumerate", "--type", t)
    assert code == 0 and rep["total"] == total


def test_enumerate_text_output(capsys):
    assert main(["enumerate", "--type", "2,2"]) == 0
    out = capsys.readouterr().out
    assert "total: 64" in out


@pytest.mark.parametrize("what,t", [
    ("decomposition", "2,2"),
    ("predicates", "2,2"),
    ("step", "2,2"),
    ("step", "3,3"),
    ("wreath-iso", "2,2"),
    ("generators", "3,3"),
])
def test_verify_suites_pass(capsys, what, t):
    code, rep = run_json(capsys, "verify", what, "--type", t)
    assert code == 0, rep
    assert rep["passed"] and rep["checks"]


def test_verify_decomposition_reports_literal_order(capsys):
    code, rep = run_json(capsys, "verify", "decomposition", "--type", "2,2")
    info = [c for c in rep["checks"] if c.get("informational")]
    assert info and info[0]["passed"] == 28 and info[0]["checked"] == 64


@pytest.mark.parametrize("what", ["coprime", "strannaya"])
def test_verify_group_lemmas(capsys, what):
    code, rep = run_json(capsys, "verify", what)
    assert code == 0 and rep["passed"]


def test_verify_wreath_orientation(capsys):
    _, rep = run_json(capsys, "verify", "wreath-iso", "--type", "2,2")
    assert rep["orientation"] == "anti"


def test_verify_generators_unsupported(capsys):
    assert main(["verify", "generators", "--type", "2,2"]) == 2
    assert "unsupported" in capsys.readouterr().err


def test_verify_needs_type(capsys):
    assert main(["verify", "step"]) == 3


def test_rank_brute_22(capsys):
    code, rep = run_json(capsys, "rank", "--type", "2,2", "--method", "brute")
    assert code == 0
    assert rep["certificate"]["value"] == 4 and rep["matches_2k"]
    assert set(rep["manifest"]) == {str(i) for i in rep["certificate"]["witness"]["generators"]}


def test_rank_brute_single_level(capsys):
    code, rep = run_json(capsys, "rank", "--type", "3", "--method", "brute")
    assert code == 0
    assert rep["certificate"]["value"] == 3 and not rep["matches_2k"]
    assert "note" in rep and rep["unmet_hypotheses"]


def test_rank_brute_too_big(capsys):
    assert main(["rank", "--type", "3,3", "--method", "brute"]) == 2


def test_rank_certified_unsupported(capsys):
    code, rep = run_json(capsys, "rank", "--type", "2,2")
    assert code == 2
    assert rep["lower"]["value"] == 4 and all(rep["lower_checks"].values())
    assert rep["upper"]["status"] == "unsupported"


def test_rank_certified_small_bound(capsys):
    assert main(["rank", "--type", "3,3", "--bound", "1000"]) == 2


@pytest.mark.parametrize("argv", [
    ["enumerate", "--type", "2,x"],
    ["enumerate", "--type", "0,2"],
    ["enumerate", "--type", ""],
    ["enumerate"],
    ["frobnicate"],
    ["rank", "--type", "2,2", "--method", "magic"],
])
def test_bad_input(capsys, argv):
    assert main(argv) == 3


def test_size_bound(capsys):
    assert main(["enumerate", "--type", "100,100,100,100"]) == 2


def test_json_byte_stable(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        assert main(["rank", "--type", "2,2", "--method", "brute", "--json", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_closure_from_file(tmp_path, capsys):
    pt = PartitionType((3, 3))
    path = tmp_path / "gens.json"
    path.write_text(json.dumps({"generators": [g.to_json() for g in group_generators(pt)]}))
    code, rep = run_json(capsys, "closure", "--gens", str(path))
    assert code == 0
    assert rep["closure"]["size"] == 1296 and rep["closure"]["reached_target"] is False
    path.write_text(json.dumps([step_witness(pt, 2).to_json()]))
    code, rep = run_json(capsys, "closure", "--gens", str(path))
    assert rep["closure"]["size"] == 1  # the step witness is idempotent


def test_closure_bad_files(tmp_path, capsys):
    assert main(["closure", "--gens", str(tmp_path / "missing.json")]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    assert main(["closure", "--gens", str(bad)]) == 3
    bad.write_text('[{"type": [2], "local": [{"v": [], "map": [3, 1]}]}]')
    assert main(["closure", "--gens", str(bad)]) == 3
    mixed = [group_generators(PartitionType((3, 3)))[0].to_json(), step_witness(PartitionType((2,)), 1).to_json()]
    bad.write_text(json.dumps(mixed))
    assert main(["closure", "--gens", str(bad)]) == 3


@pytest.mark.skipif(shutil.which("np") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["np", "enumerate", "--type", "2,2", "--json"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["total"] == 64


def test_module_entry():
    r = subprocess.run([sys.executable, "-m", "nestedpart.cli", "verify", "step", "--type", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0
