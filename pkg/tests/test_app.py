import json
import math

import numpy as np
import pytest

from posinorm import app, harness
from posinorm.app import (
    EXIT_DIM,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_RESOURCE,
    EXIT_SUITE,
    EXIT_ZERO_WEIGHT,
    ParseError,
    ResourceError,
    curve_points,
    emit,
    main,
    matrix_document,
    parse_matrix,
    parse_weights,
)
from posinorm.harness import Failure, TrialOutcome

GOLDEN = (1 + math.sqrt(5)) / 2


def write_matrix(tmp_path, M, name="m.json"):
    p = tmp_path / name
    p.write_text(emit(matrix_document(M)))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK, out
    return json.loads(out)


def test_matrix_round_trip(rng):
    M = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    M[0, 0] = -0.0
    back = parse_matrix(emit(matrix_document(M)))
    assert np.array_equal(back, M)
    assert emit(matrix_document(back)) == emit(matrix_document(M))


@pytest.mark.parametrize("text", [
    '{"rows": 1, "cols": 1, "data": [[[NaN, 0]]]}',
    '{"rows": 1, "cols": 1, "data": [[[Infinity, 0]]]}',
    '{"rows": 1, "cols": 1, "data": [[[1]]]}',
    '{"rows": 2, "cols": 1, "data": [[[1, 0]]]}',
    '{"rows": 1, "cols": 1}',
    '{"rows": 0, "cols": 1, "data": []}',
    '{"rows": 1, "cols": 1, "data": [[["1", 0]]]}',
    '[1, 2]',
    'not json',
])
def test_parse_matrix_rejects(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


def test_parse_matrix_resource_guard():
    with pytest.raises(ResourceError):
        parse_matrix('{"rows": 5000, "cols": 1, "data": []}')


def test_emit_is_canonical():
    s = emit({"b": 1.0, "a": [1, 2.5, -0.0], "c": math.inf, "z": 1 + 2j, "t": True})
    assert s.index('"a"') < s.index('"b"') < s.index('"c"')
    doc = json.loads(s)
    assert doc["c"] is None and doc["z"] == [1.0, 2.0] and doc["a"] == [1, 2.5, 0.0]
    assert "-0" not in s and s.endswith("\n")
    assert float(json.loads(emit({"x": 0.1 + 0.2}))["x"]) == 0.1 + 0.2


def test_parse_weights():
    assert parse_weights("recip").kind == "recip"
    assert parse_weights("bilrecip").support == "bilateral"
    assert parse_weights("list:1,2,3").params == (1.0, 2.0, 3.0)
    for bad in ("foo", "const:", "const:x", "recip:2", "list:", "pow:nan"):
        with pytest.raises(ParseError):
            parse_weights(bad)


def test_curve_points():
    assert curve_points(4) == [1, 2, 3, 4]
    pts = curve_points(1000)
    assert pts[:128] == list(range(1, 129)) and pts[128:] == [256, 512, 1000]


def test_classify_jordan(tmp_path, capsys):
    path = write_matrix(tmp_path, [[1, 1], [0, 1]])
    doc = run_json(capsys, "classify", path)
    assert doc["schema_version"] == "1"
    r = doc["result"]
    assert r["alpha_min"] == pytest.approx(GOLDEN, abs=1e-12)
    assert r["verdicts"]["posinormal"] and not r["verdicts"]["dominant"]
    assert r["dominance"]["table"][0]["posinormal"] is False
    assert r["hierarchy_violations"] == []


def test_classify_nilpotent_has_witness(tmp_path, capsys):
    doc = run_json(capsys, "classify", write_matrix(tmp_path, [[0, 1], [0, 0]]))
    r = doc["result"]
    assert not r["verdicts"]["posinormal"] and r["alpha_min"] is None
    w = np.array([complex(*z) for z in r["witnesses"]["posinormal"]])
    assert abs(abs(w[0]) - 1) < 1e-12 and abs(w[1]) < 1e-12


def test_powers_jordan3(tmp_path, capsys):
    path = write_matrix(tmp_path, np.eye(3, k=1))
    doc = run_json(capsys, "powers", path, "--max-n", "3")
    frags = doc["result"]["powers"]
    assert [f["posinormal"] for f in frags] == [False, False, True]
    assert doc["result"]["chain"]["ascent"] == 3
    assert doc["result"]["posinormal_ascent_check"]["consistent"]


def test_shift_reciprocal(capsys):
    doc = run_json(capsys, "shift", "--weights", "recip", "--n", "3", "1", "2")
    rows = doc["result"]["powers"]
    assert [r["n"] for r in rows] == [1, 2, 3]
    assert [r["sup_value"] for r in rows] == [2, 6, 20]
    assert [r["bound_n_squared"] for r in rows] == [2, 16, 512]
    assert all(r["bound_holds"] and r["posinormal"] for r in rows)


def test_shift_bilateral_note(capsys):
    r = run_json(capsys, "shift", "--weights", "bilrecip")["result"]
    assert r["note"] and r["powers"][0]["posinormal"] and r["powers"][0]["coposinormal"]


def test_example1_small(capsys):
    r = run_json(capsys, "example1", "--k-max", "4")["result"]
    assert [row["beta"] for row in r["beta_table"]] == pytest.approx([1, 1 / 2, 1 / 3, 1 / 4], rel=1e-12)
    assert [c["alpha_full"] for c in r["curve"]] == pytest.approx([1, math.sqrt(2), math.sqrt(3), 2], abs=1e-10)
    assert all(all(v) for v in r["range_components"].values())
    assert r["square_blocks"]["max_defect"] < 1e-12


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "shift", "--weights", "foo")[0] == EXIT_PARSE
    assert run(capsys, "bogus")[0] == EXIT_PARSE
    assert run(capsys, "check", "--suite", "nope")[0] == EXIT_PARSE
    assert run(capsys, "shift", "--weights", "list:1,0,1")[0] == EXIT_ZERO_WEIGHT
    assert run(capsys, "shift", "--weights", "const:0")[0] == EXIT_ZERO_WEIGHT
    assert run(capsys, "classify", write_matrix(tmp_path, np.ones((2, 3))))[0] == EXIT_DIM
    assert run(capsys, "example1", "--k-max", "400", "--depth", "6")[0] == EXIT_RESOURCE
    bad = tmp_path / "bad.json"
    bad.write_text('{"rows": 1, "cols": 1, "data": [[[NaN, 0]]]}')
    assert run(capsys, "classify", str(bad))[0] == EXIT_PARSE
    assert run(capsys, "classify", str(tmp_path / "missing.json"))[0] == EXIT_PARSE


def test_suite_failure_exit(monkeypatch, capsys):
    def failing(seed, dims, tol):
        return TrialOutcome((Failure(seed, "forced", {"x": 1.0}),))

    monkeypatch.setitem(harness.SUITES, "t3", (failing, (2,)))
    code, out, _ = run(capsys, "check", "--suite", "t3", "--trials", "2")
    assert code == EXIT_SUITE
    doc = json.loads(out)
    assert not doc["result"]["passed"]
    assert doc["result"]["suites"][0]["failures"][0]["property"] == "forced"


def test_text_output(capsys):
    code, out, _ = run(capsys, "shift", "--weights", "const:1", "--n", "7", "--text")
    assert code == EXIT_OK
    assert "sup_value" in out and not out.lstrip().startswith("{")


def test_tolerance_precedence(monkeypatch, capsys):
    monkeypatch.setenv(app.TOL_ENV, "1e-7")
    doc = run_json(capsys, "shift", "--weights", "const:1")
    assert doc["tolerance"]["psd_tol"] == 1e-7 and doc["tolerance"]["rank_rel_tol"] == 1e-7
    doc = run_json(capsys, "shift", "--weights", "const:1", "--tol", "1e-9")
    assert doc["tolerance"]["residual_tol"] == 1e-9
    monkeypatch.setenv(app.TOL_ENV, "garbage")
    assert run(capsys, "shift", "--weights", "const:1")[0] == EXIT_PARSE


def test_check_is_deterministic(capsys):
    argv = ("check", "--suite", "all", "--trials", "5", "--seed", "42")
    code, a, err = run(capsys, *argv)
    assert code == EXIT_OK and "trials" in err
    _, b, _ = run(capsys, *argv)
    assert a == b
    assert "elapsed" not in a
