import io
import json
import os
import subprocess
import sys

import pytest

from eqmonoid.cli import run

Z2_CAYLEY = {"cayley": [[0, 1], [1, 0]]}
Z2_DOC = {"group": Z2_CAYLEY, "orbits": [{"stabilizer": [0], "count": 1}, {"stabilizer": [0, 1], "count": 2}]}
CASE2_DOC = {"group": Z2_CAYLEY, "orbits": [{"stabilizer": [0], "count": "inf"}, {"stabilizer": [0, 1], "count": 2}]}
CASE2_MAP = {"finite": [[1, 0, 0], [1, 1, 0]],
             "tail": [{"patch": [[[0, 0], [1, 0, 0]], [[0, 3], [0, 1, 1]], [[0, 4], [0, 1, 0]]]}]}


def call(args, doc):
    out, err = io.StringIO(), io.StringIO()
    text = doc if isinstance(doc, str) else json.dumps(doc)
    code = run(args, stdin=io.StringIO(text), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def ok(args, doc):
    code, out, err = call(args, doc)
    assert code == 0, err
    return json.loads(out)


def test_analyze_finite():
    d = ok(["analyze"], Z2_DOC)
    assert d["rank_formula"] == 2 and d["collapse_type_count"] == 2
    assert d["kappa"] == [0]
    assert [s["U_size"] for s in d["strata"]] == [2, 1]
    assert d["generating_set"] == "W"


def test_analyze_case2():
    d = ok(["analyze"], CASE2_DOC)
    assert d["rank_formula"] == 4
    assert [g["name"] for g in d["generators"]] == ["collapse:0→(0,0)", "swap-collapse:1", "mu-hat", "nu-hat"]
    assert d["size"] == "inf"


def test_enumerate():
    assert ok(["enumerate"], Z2_DOC) == {"aut": 4, "end": 16}


def test_relrank():
    assert ok(["relrank"], Z2_DOC) == {"formula": 2}
    assert ok(["relrank", "--oracle"], Z2_DOC) == {"agree": True, "bruteforce": 2, "formula": 2}
    assert ok(["relrank"], CASE2_DOC) == {"formula": 4}


def test_factorize_and_verify():
    doc = {"gset": CASE2_DOC, "map": CASE2_MAP}
    rep = ok(["factorize"], doc)
    assert rep["verified"] and rep["length"] == len(rep["word"])
    v = ok(["verify"], dict(doc, word=rep["word"]))
    assert v["equal"] and v["first_difference"] is None
    v = ok(["verify"], dict(doc, word=rep["word"][1:]))
    assert not v["equal"] and v["first_difference"] is not None


def test_verify_finite():
    doc = {"gset": Z2_DOC, "map": {"finite": [[1, 0, 0], [1, 0, 0], [1, 1, 0]]},
           "word": [{"gen": "collapse:0→(0,0)"}]}
    v = ok(["verify"], doc)
    assert v == {"equal": True, "first_difference": None, "window": None}


def test_window():
    d = ok(["window", "--window", "6"], {"gset": CASE2_DOC, "map": CASE2_MAP})
    assert len(d["table"]) == 6
    assert d["table"][0] == [0, [1, 0, 0]]
    assert d["table"][3] == [3, [0, 1, 1]]
    assert d["table"][5] == [5, [0, 5, 0]]


@pytest.mark.parametrize("args,doc,code,err", [
    (["analyze"], "{oops", 1, "malformed-input"),
    (["analyze"], {"group": Z2_CAYLEY, "orbits": [{"stabilizer": [1]}]}, 1, "malformed-input"),
    (["bogus"], Z2_DOC, 1, "usage"),
    (["enumerate"], CASE2_DOC, 2, "unsupported-case"),
    (["window"], {"gset": Z2_DOC, "map": {}}, 2, "unsupported-case"),
    (["enumerate", "--cap", "3"], Z2_DOC, 2, "cap-exceeded"),
    (["factorize"], Z2_DOC, 1, "malformed-input"),
    (["factorize"], {"gset": Z2_DOC, "map": {"finite": [[0, 0, 0], [0, 0, 0], [1, 1, 0]]}}, 1, "infeasible-map"),
    (["analyze"], {"group": {"degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]},
                   "orbits": [{"stabilizer": [0, 1], "count": "inf"}]}, 2, "unsupported-case"),
    (["analyze"], {"group": {"degree": 9, "generators": [[1, 2, 3, 4, 5, 6, 7, 8, 0],
                                                         [1, 0, 2, 3, 4, 5, 6, 7, 8]]},
                   "orbits": []}, 2, "group-too-large"),
])
def test_error_codes(args, doc, code, err):
    got, out, stderr = call(args, doc)
    assert got == code
    assert out == ""
    assert json.loads(stderr)["error"]["code"] == err


def test_missing_file():
    got, _, err = call(["analyze", "--input", "/nonexistent/x.json"], "")
    assert got == 1 and json.loads(err)["error"]["code"] == "input-unreadable"


def test_module_entry_point(tmp_path):
    path = tmp_path / "z2.json"
    path.write_text(json.dumps(Z2_DOC))
    res = subprocess.run([sys.executable, "-m", "eqmonoid", "relrank", "--input", str(path)],
                         capture_output=True, text=True, env=dict(os.environ))
    assert res.returncode == 0
    assert json.loads(res.stdout) == {"formula": 2}
