import json
import subprocess
import sys

import pytest

from akcurves.catalog import BINOMIAL_CURVE, BINOMIAL_SECTION
from akcurves.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out), out


def test_classify(capsys):
    code, doc, _ = run_json(capsys, "classify", "--at", "0,0", "y^2 - x^5")
    assert code == 0 and doc["pass"]
    assert doc["results"][0]["kind"] == "A" and doc["results"][0]["k"] == 4
    assert doc["command"] == "classify" and doc["inputs"]["at"] == "0,0"


def test_parse_error_exit_code(capsys):
    code, out, err = run(capsys, "classify", "y^2 -")
    assert code == 2 and "line 1, column" in err and out == ""


def test_field_constant_misuse(capsys):
    code, _, err = run(capsys, "classify", "y^2 - w*x^3")
    assert code == 2 and "--field=-3" in err
    code, doc, _ = run_json(capsys, "classify", "--field", "-3", "y^2 - w*x^3")
    assert code == 0 and doc["results"][0]["k"] == 2
    code, _, _ = run(capsys, "classify", "--field", "-1", "y^2 - w*x^3")
    assert code == 2


def test_usage_errors(capsys):
    assert run(capsys, "intersect", "y")[0] == 2
    assert run(capsys, "homogenize", "x - y^2")[0] == 2
    assert run(capsys, "link", "--m", "1", "x0 - x1*y0")[0] == 2
    assert run(capsys, "witness", "3")[0] == 2
    assert run(capsys, "witness", "3", "13")[0] == 2
    with pytest.raises(SystemExit):
        main(["no-such-verb"])


def test_intersect_and_bidegree(capsys):
    code, doc, _ = run_json(capsys, "intersect", "y^2 - x^3", "y^2 - x^5")
    assert code == 0 and doc["results"][0]["intersection"] == 6
    code, doc, _ = run_json(capsys, "intersect", "x*y", "x")
    assert doc["results"][0]["intersection"] == "inf"
    code, doc, _ = run_json(capsys, "bidegree", "--b", "4", "x^3 - (y^2 - x)^2")
    assert code == 0 and doc["results"][0]["minimal_b"] == 4
    assert run(capsys, "bidegree", "--b", "3", "x^3 - (y^2 - x)^2")[0] == 1


def test_homogenize_dehomogenize(capsys):
    code, doc, _ = run_json(capsys, "homogenize", "--m", "2", "--a", "3", "x^3 - (y^2 - x)^2")
    assert code == 0
    G = doc["results"][0]["equation"]
    assert doc["results"][0]["b"] == 6
    code, doc, _ = run_json(capsys, "dehomogenize", "--m", "2", G)
    code2, doc2, _ = run_json(capsys, "classify", doc["results"][0]["polynomial"])
    assert doc2["results"][0]["k"] == 5


def test_link(capsys):
    code, doc, _ = run_json(capsys, "link", "--m", "1", "--point", "[1:1;1:1]", "x0 - x1*y0 - x1*y1")
    assert code == 0
    r = doc["results"][0]
    assert r["direction"] == "down" and r["target_m"] == 0 and r["inverse_restores"]


def test_chain(capsys):
    code, doc, _ = run_json(capsys, "chain", "--m", "0", "--point", "[1:1;1:-1]", "--n", "7",
                            BINOMIAL_CURVE, BINOMIAL_SECTION)
    r = doc["results"][0]
    assert code == 0 and r["final"] == [27, -3, 13, 0, 3] and r["audit"]["ok"]
    code, out, _ = run(capsys, "chain", "--m", "0", "--point", "[1:1;1:-1]", "--n", "2",
                       BINOMIAL_CURVE, BINOMIAL_SECTION)
    assert code == 0 and "audit: ok" in out


def test_witness_and_bounds(capsys):
    code, doc, _ = run_json(capsys, "witness", "3", "9")
    r = doc["results"][0]
    assert code == 0 and r["singularity"]["k"] == 13 and r["initial_info"] == [6, 4, -1, 7, 0]
    code, doc, _ = run_json(capsys, "bounds", "--b", "9")
    assert doc["results"][0]["genus_bound"] == 14 and doc["results"][0]["alpha_ratio"] == "28/27"
    code, out, _ = run(capsys, "bounds")
    assert code == 0 and len(out.strip().splitlines()) == 12


def test_verify_table(capsys):
    code, out, _ = run(capsys, "verify-table")
    assert code == 0
    assert out.strip().splitlines()[-2] == "N(3,b): 3 5 7 8 10 12 13 15 17 18"
    assert out.count("PASS") == 11


def test_identities_reports_unequal_row(capsys):
    code, out, _ = run(capsys, "identities")
    # one quoted identity carries a sign slip; the verb must say so
    assert code == 1 and "cubic_conic_shift" in out and "UNEQUAL" in out


def test_json_is_deterministic_and_round_trips(capsys):
    argv = ("verify-table", "--b", "10")
    _, _, first = run_json(capsys, *argv)
    _, doc, second = run_json(capsys, *argv)
    assert first == second
    assert json.dumps(doc, sort_keys=True, indent=2) + "\n" == first
    assert set(doc) == {"command", "inputs", "results", "pass"}


def test_text_output_is_deterministic(capsys):
    outs = {run(capsys, "classify", "--at", "1,0", "y^2 - (x - 1)^7")[1] for _ in range(3)}
    assert len(outs) == 1


def test_timing_is_opt_in(capsys):
    _, doc, _ = run_json(capsys, "bounds", "--b", "5", "--timing")
    assert "seconds" in doc
    _, doc, _ = run_json(capsys, "bounds", "--b", "5")
    assert "seconds" not in doc


def test_file_input(capsys, tmp_path):
    f = tmp_path / "curves.txt"
    f.write_text("# two curves\ny^2 - x^3\n\ny - x^2\n")
    code, doc, _ = run_json(capsys, "intersect", "--file", str(f))
    assert code == 0 and doc["results"][0]["intersection"] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "akcurves", "classify", "y^2 - x^3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "k: 2" in proc.stdout
