from __future__ import annotations

import json

import pytest

from qkfinite.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_table1(capsys):
    code, doc, _ = run(capsys, "table1")
    assert code == 0 and doc["report"]["all_match"]
    rows = {r["type"]: r["det_2AR"] for r in doc["report"]["rows"]}
    assert rows["E6"] == 3 and rows["G2"] == 3 and rows["B4"] == 16


def test_verify_ineq_e8_fork(capsys):
    code, doc, _ = run(capsys, "verify-ineq", "--family", "E8", "--index", "4")
    assert code == 3
    rep = doc["report"]
    assert rep["det_2AQ"] == -14 and rep["verdict"] is False and rep["expected_falsification"]
    assert rep["witness"] and any(rep["witness"])


def test_verify_ineq_ok(capsys):
    code, doc, _ = run(capsys, "verify-ineq", "--family", "D", "--rank", "5", "--index", "3", "--radius", "3")
    assert code == 0 and doc["report"]["verdict"] and doc["report"]["brute_force_holds"]


def test_enumerate_degrees(capsys):
    code, doc, _ = run(capsys, "enumerate-degrees", "--family", "A1", "--indices", "1,1")
    assert code == 0 and doc["report"]["degrees"] == [[0], [1]]


def test_enumerate_from_json(tmp_path, capsys):
    f = tmp_path / "in.json"
    f.write_text(json.dumps({"family": "A", "rank": 3, "indices": [1, 3], "variant": "SIMPLY_LACED_DISTINCT"}))
    code, doc, _ = run(capsys, "degree-bound", "--input", str(f))
    assert code == 0 and doc["report"]["degrees"] == [[0, 0, 0]] and doc["report"]["max_total_degree"] == 0


def test_schema_error_names_field(tmp_path, capsys):
    f = tmp_path / "in.json"
    f.write_text(json.dumps({"lattice": {"s": 1, "p": [[1]]}, "F": [[1], ["x"]], "C": 0, "box": [4]}))
    code, doc, err = run(capsys, "propagate", "--input", str(f))
    assert code == 2 and doc is None
    assert "$.F[1][0]" in err


def test_usage_errors(capsys):
    assert run(capsys, "verify-ineq", "--family", "E9", "--index", "1")[0] == 2
    assert run(capsys, "enumerate-degrees", "--family", "A2", "--indices", "1,x")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "enumerate-degrees", "--family", "B2", "--indices", "1,2",
               "--variant", "SIMPLY_LACED_DISTINCT")[0] == 2


def test_e8_scan(capsys):
    code, doc, _ = run(capsys, "e8-scan")
    assert code == 3
    assert doc["report"]["fork"] == 4 and doc["report"]["negative"] == [4, 5]


def test_verify_j(capsys):
    code, doc, _ = run(capsys, "verify-j-a1", "--dmax", "5")
    assert code == 0 and doc["report"]["equality"]


def test_propagate_and_certify(tmp_path, capsys):
    f = tmp_path / "in.json"
    f.write_text(json.dumps({"lattice": {"s": 1, "p": [[1]]}, "F": [[1]], "C": "-1", "box": [5]}))
    code, doc, _ = run(capsys, "propagate", "--input", str(f))
    assert code == 0 and doc["report"]["L"] == {"0": "0", "1": "0", "2": "1", "3": "3", "4": "6", "5": "10"}
    code, doc, _ = run(capsys, "certify", "--input", str(f))
    assert code == 0 and doc["report"]["verified"] and doc["report"]["certificate"]["m"] == ["-1"]


def test_shift_connection_input(tmp_path, capsys):
    f = tmp_path / "in.json"
    doc = {"lattice": {"s": 1, "p": [[1]]},
           "T": {"trunc": [2], "coeffs": {"0": [[1]], "1": [[{"num": ["1"], "den": ["1", "-1"]}]]}},
           "P": [[1]], "p": [1]}
    f.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "shift-connection", "--input", str(f))
    assert code == 0 and out["report"]["difference_identity"]
    assert out["report"]["A"]["coeffs"]["1"] == [[{"num": ["-1"], "den": ["1"]}]]
    doc["p"] = [-3]
    f.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "shift-connection", "--input", str(f))
    assert code == 1 and out["report"]["degree"] == [1]


def test_shift_connection_seeded(capsys):
    code, doc, _ = run(capsys, "shift-connection", "--seed", "4", "--trunc", "3,3")
    assert code == 0 and doc["report"]["ok"] and doc["report"]["scope"] == "box-verified"


@pytest.mark.parametrize("argv", [["table1"], ["enumerate-degrees", "--family", "A2", "--indices", "1,1,2,2"],
                                  ["shift-connection", "--seed", "7"]])
def test_byte_identical(capsys, argv):
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_output_file(tmp_path, capsys):
    out = tmp_path / "o.json"
    assert main(["table1", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["header"]["command"] == "table1"
