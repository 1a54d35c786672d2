import json
import subprocess
import sys
from pathlib import Path

import pytest

from dualcat.cli import main

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_hom(capsys):
    assert run_json(capsys, "hom", 1, 1, 0)["dim"] == 2
    doc = run_json(capsys, "hom", 2, 1, 1, "--brute")
    assert doc["dim"] == 1 and doc["match"] is True
    doc = run_json(capsys, "hom", "inf", 2, 0)
    assert doc["dim"] == 1 and doc["eps_type"] is True


def test_hom_brute_infinite(capsys):
    doc = run_json(capsys, "hom", "inf", "inf", 2, "--brute")
    assert doc["match"] is True and doc["truncation"] >= 5
    assert run_json(capsys, "hom", 3, "inf", 1, "--brute")["match"] is True


def test_hom_table_output(capsys):
    code, out, _ = run(capsys, "--output", "table", "hom", 1, 1, 0)
    assert code == 0 and "dim: 2" in out


def test_global_options_after_subcommand(capsys):
    doc = run_json(capsys, "hom", 2, 1, 1, "--brute", "--field", "q")
    assert doc["match"] is True


@pytest.mark.parametrize("name,want", [
    ("x3.json", [(3, 0, 1)]),
    ("cone_eps.json", [(2, 0, 1)]),
    ("scrambled_x1_x2.json", [(1, 0, 1), (2, 0, 1)]),
])
def test_decompose_fixtures(capsys, name, want):
    doc = run_json(capsys, "decompose", FIX / name)
    assert [(s["i"], s["h"], s["m"]) for s in doc["summands"]] == want


def test_decompose_invalid_complex_exit_code(capsys):
    code, _, err = run(capsys, "decompose", FIX / "bad_d2.json")
    assert code == 3 and "degree" in err


def test_missing_file_exit_code(capsys):
    code, _, err = run(capsys, "decompose", FIX / "does_not_exist.json")
    assert code == 2 and err


def test_bad_field_exit_code(capsys):
    code, _, _ = run(capsys, "--field", "gf:6", "hom", 1, 1, 0)
    assert code == 2


def test_compose(capsys):
    doc = run_json(capsys, "compose", FIX / "proj_2_1.json", FIX / "incl_1_2.json")
    assert doc["blocks"] == []
    code, _, _ = run(capsys, "compose", FIX / "incl_1_2.json", FIX / "incl_1_2.json")
    assert code == 2


def test_cone(capsys):
    doc = run_json(capsys, "cone", "--source", "1:0", "--target", "1:0", "--kind", "eps")
    assert doc["cone"]["summands"] == [{"i": 2, "h": 0, "m": 1}]
    doc = run_json(capsys, "cone", "--source", "1:0", "--target", "1:0", "--kind", "1")
    assert doc["cone"]["summands"] == []
    code, _, _ = run(capsys, "cone", "--source", "5:0", "--target", "3:-3", "--kind", "1")
    assert code == 2


def test_hn(capsys):
    doc = run_json(capsys, "hn", "--sigma", "0,1,1/2", "2:-1")
    assert [f["phase"] for f in doc["factors"]] == [0.5, -0.5]
    doc = run_json(capsys, "hn", "--sigma", "0,1,1", "@" + str(FIX / "object.json"))
    assert [f["phase"] for f in doc["factors"]] == [3.0, 1.0]


def test_stab(capsys):
    doc = run_json(capsys, "stab", "witness", "--from", "0,1,1", "--to", "0,1,0.5")
    assert doc == {"kappa": 1.0, "theta": 0.5}
    doc = run_json(capsys, "stab", "chart", "--sigma", "0,1,1")
    assert doc["re"] == 0.0 and abs(doc["im"] - 3.141592653589793) < 1e-12
    doc = run_json(capsys, "stab", "act", "--g", "1,1", "--sigma", "0,1,0.5")
    assert doc == {"h": -1, "mass": 1.0, "phi": 0.5}
    doc = run_json(capsys, "stab", "chart", "--inverse", "0,3.141592653589793")
    assert doc["h"] == 0 and abs(doc["phi"] - 1) < 1e-12


def test_functor(capsys):
    assert run_json(capsys, "functor", "exact", "--lambda", "2")["exact"] is False
    assert run_json(capsys, "functor", "exact", "--lambda", "1")["exact"] is True
    doc = run_json(capsys, "functor", "check", FIX / "functor_lambda2.json")
    assert doc["functorial"] is True and all(v["fail"] == 0 for v in doc["relations"].values())
    doc = run_json(capsys, "functor", "normalize", FIX / "functor_dressed.json")
    assert (doc["lambda"], doc["mu"], doc["shift"]) == ("3", "5", 2)
    doc = run_json(capsys, "functor", "normalize", "--lambda", "1/2", "--imax", "3", "--field", "q")
    assert doc["lambda"] == "1/2"


def test_silting(capsys):
    doc = run_json(capsys, "silting", "--imax", 5, "--hmax", 4)
    assert doc["certificate"] == "empty" and doc["generating_db"] == []
    assert all(s["silting"] and not s["generates"] for s in doc["maximal_silting"])


def test_selftest_single_suite(capsys):
    code, out, _ = run(capsys, "--output", "table", "selftest", "exactness")
    assert code == 0 and out.startswith("PASS [exactness]")
    code, _, _ = run(capsys, "selftest", "nonsense")
    assert code == 2


def test_output_is_deterministic(capsys):
    first = run(capsys, "--seed", 3, "selftest", "group-action", "hearts")
    second = run(capsys, "--seed", 3, "selftest", "group-action", "hearts")
    assert first == second and first[0] == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "dualcat", "hom", "1", "1", "0"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["dim"] == 2
