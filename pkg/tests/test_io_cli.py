import json
import subprocess
import sys
from fractions import Fraction

import pytest

from wlskit import cli, fixtures, io as wio
from wlskit.abelian import Morphism, Presentation
from wlskit.matrix import IntMatrix, InvalidInput
from wlskit.rings import exterior_ring
from wlskit.spectral import hopf_model


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out or err)


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


# ---------------------------------------------------------------- serialization

def test_matrix_round_trip():
    M = IntMatrix.from_rows([[1, -2], [3, 4], [0, 5]])
    assert wio.matrix_from_json(wio.matrix_to_json(M)) == M
    assert wio.matrix_from_json([[1, -2], [3, 4], [0, 5]]) == M


def test_big_integers_are_strings():
    big = 2**70
    enc = wio.encode({"x": big, "y": 5, "z": Fraction(1, 3), "w": float("inf")})
    assert enc == {"x": str(big), "y": 5, "z": "1/3", "w": "inf"}
    M = IntMatrix.from_rows([[big, 1]])
    doc = json.loads(wio.dumps(wio.matrix_to_json(M)))
    assert wio.matrix_from_json(doc) == M


def test_group_and_morphism_round_trip():
    G = Presentation(2, IntMatrix.from_rows([[2, 0], [0, 6]]))
    f = Morphism(G, G, IntMatrix.from_rows([[1, 0], [0, 5]]))
    g = wio.morphism_from_json(json.loads(wio.dumps(wio.morphism_to_json(f))))
    assert g.source.canonical == G.canonical and g.matrix == f.matrix


def test_filtered_and_ring_round_trip():
    FC = hopf_model()
    back = wio.filtered_from_json(json.loads(wio.dumps(wio.filtered_to_json(FC))))
    assert wio.filtered_to_json(back) == wio.filtered_to_json(FC)
    R = exterior_ring(3)
    assert wio.ring_from_json(R.to_dict()).to_dict() == R.to_dict()


def test_bad_entry_reports_field():
    with pytest.raises(InvalidInput, match=r"matrix\.entries\[0\]\[1\]"):
        wio.matrix_from_json({"rows": 1, "cols": 2, "entries": [[1, "x"]]})


def test_document_type_is_checked(tmp_path):
    p = write(tmp_path, "a.json", wio.document("matrix", wio.matrix_to_json(IntMatrix.identity(2))))
    assert wio.load_document(p, ("matrix",))[0] == "matrix"
    with pytest.raises(InvalidInput):
        wio.load_document(p, ("ring",))


@pytest.mark.parametrize("name", fixtures.names())
def test_shipped_fixture_matches_builder(name):
    assert fixtures.path(name).read_text() == fixtures.render(name)


def test_unknown_fixture_rejected():
    with pytest.raises(InvalidInput):
        fixtures.path("nope")


def test_census_fixture_content():
    doc = fixtures.load("gl2_census")
    assert doc["finite_orders"] == [1, 2, 3, 4, 6]


# ---------------------------------------------------------------- CLI

def test_cli_matrix_order(capsys, tmp_path):
    p = write(tmp_path, "a.json", wio.document("matrix", {"rows": 2, "cols": 2, "entries": [[0, -1], [1, 0]]}))
    code, rep = run_json(capsys, "matrix", "order", "--in", p)
    assert code == 0 and rep["result"]["order"] == 4 and rep["schema"] == wio.REPORT_SCHEMA


def test_cli_ss_golden(capsys):
    code, rep = run_json(capsys, "ss", "degenerate-q", "--fixture", "hopf")
    assert code == 0 and rep["result"]["degenerates"] is False
    code, rep = run_json(capsys, "ss", "degenerate-q", "--fixture", "circles")
    assert code == 0 and rep["result"]["degenerates"] is True


def test_cli_ss_bound(capsys):
    code, rep = run_json(capsys, "ss", "bound", "--n", "10", "--p", "1", "--k", "2",
                         "--exp-iota-high", "4", "--exp-iota-3", "2", "--exp-w", "5")
    assert code == 0
    res = rep["result"]
    assert (res["lambda"], res["mu"], res["Lambda"]) == (250, 25, 5)


def test_cli_ring_commands(capsys):
    code, rep = run_json(capsys, "ring", "wls", "--fixture", "cp2", "--omega", "[1]")
    assert code == 0 and rep["result"]["wls"] is True
    code, rep = run_json(capsys, "ring", "wls", "--fixture", "s1xs3", "--omega", "[]")
    assert code == 0 and rep["result"]["wls"] is False
    code, rep = run_json(capsys, "ring", "discsym-bound", "--fixture", "t2xs2")
    assert code == 0 and rep["result"]["discsym_bound"] == 3


def test_cli_exit_1_on_bad_input(capsys, tmp_path):
    p = write(tmp_path, "bad.json", wio.document("matrix", {"rows": 1, "cols": 2, "entries": [[1, "x"]]}))
    code, rep = run_json(capsys, "matrix", "order", "--in", p)
    assert code == 1
    assert rep["error"]["file"] == p and rep["error"]["field"] == "matrix.entries[0][1]"


def test_cli_exit_1_on_missing_file(capsys, tmp_path):
    code, rep = run_json(capsys, "matrix", "order", "--in", str(tmp_path / "missing.json"))
    assert code == 1 and rep["error"]["kind"] == "invalid_input"


def test_cli_exit_2_on_budget(capsys, tmp_path):
    p = write(tmp_path, "a.json", wio.document("matrix", {"rows": 2, "cols": 2, "entries": [[0, -1], [1, 0]]}))
    code, rep = run_json(capsys, "matrix", "root", "--in", p, "--r", "2", "--bound", "3", "--budget", "10")
    assert code == 2 and rep["error"]["kind"] == "budget_exceeded"
    code, rep = run_json(capsys, "matrix", "root", "--in", p, "--r", "2", "--bound", "3")
    assert code == 0 and rep["result"]["found"] is False


def test_cli_usage_on_unknown_subcommand(capsys):
    code, out, err = run(capsys, "ring", "frobnicate")
    assert code == 1 and "usage" in err
    code, out, err = run(capsys, "ring")
    assert code == 1 and "usage" in err
    code, out, err = run(capsys)
    assert code == 1 and "usage" in err


def test_cli_text_format(capsys):
    code, out, err = run(capsys, "ring", "tau", "--fixture", "torus3")
    assert code == 0 and out.startswith("# ring tau\n")


def test_cli_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, err = run(capsys, "ring", "betti", "--fixture", "cp2", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["result"]["sum"] == 3


def test_cli_entry_point_subprocess():
    proc = subprocess.run([sys.executable, "-m", "wlskit.cli", "ring", "wls-find", "--fixture", "cp2", "--seed", "7", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["found"] is True


def test_cli_failed_search_exits_2_with_report(capsys):
    code, rep = run_json(capsys, "ring", "wls-find", "--fixture", "s1xs3", "--seed", "7", "--budget", "20")
    assert code == 2 and rep["result"]["found"] is False and rep["result"]["attempts"] == 20
