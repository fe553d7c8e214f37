import json

import pytest

import rank1det.bench as bench
from rank1det.main import main
from rank1det.reports import SCHEMA_VERSION


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


# ============================================================
# verify
# ============================================================
def test_verify_envelope(capsys):
    code, doc, _ = run_json(capsys, "verify", "--seed", "42", "--trials", "40", "--max-n", "6")
    assert code == 0
    assert doc["schema"] == SCHEMA_VERSION
    assert doc["command"] == "verify"
    assert doc["mismatches"] == 0
    assert doc["trials"] == 40
    assert doc["kind"] == "q"


def test_verify_float_kind(capsys):
    code, doc, _ = run_json(capsys, "verify", "--seed", "1", "--trials", "30", "--max-n", "8", "--kind", "f64")
    assert code == 0
    assert doc["kind"] == "f64"
    assert doc["expansion_checked"] == 0


def test_verify_empty_matrices(capsys):
    code, doc, _ = run_json(capsys, "verify", "--trials", "3", "--max-n", "0")
    assert code == 0
    assert doc["dims"] == [0]


@pytest.mark.parametrize("argv", [
    ["verify", "--trials", "0"],
    ["verify", "--max-n", "-1"],
    ["verify", "--kind", "int"],
    ["verify", "--trials", "many"],
])
def test_verify_usage_errors(capsys, argv):
    code, doc, err = run_json(capsys, *argv)
    assert code == 2
    assert doc["command"] == "verify"
    assert doc["error"].startswith("[USAGE]")


def test_argparse_type_error_is_enveloped(capsys):
    code, doc, err = run_json(capsys, "verify", "--trials", "abc")
    assert code == 2
    assert doc["schema"] == SCHEMA_VERSION
    assert "invalid int value" in doc["error"]
    assert "usage:" in err


# ============================================================
# erratum
# ============================================================
def test_erratum_demo(capsys):
    code, doc, _ = run_json(capsys, "erratum")
    assert code == 0
    assert (doc["corrected"], doc["erroneous"], doc["dense"]) == ("11", "-192/35", "11")
    assert doc["agree_corrected_dense"] is True
    assert doc["agree_erroneous_dense"] is False


def test_erratum_from_file(capsys, write):
    path = write("zero.rank1", "rank1 2 q\nx: 0 7\na: 1 2\nb: 3 4\n")
    code, doc, _ = run_json(capsys, "erratum", path)
    assert code == 0
    assert doc["erroneous"] == "undefined (division by zero)"
    assert doc["corrected"] == doc["dense"] == "-24"


def test_erratum_parse_error(capsys, write):
    path = write("bad.rank1", "rank1 2 q\nx: 5 7\na: 1 z\nb: 3 4\n")
    code, doc, err = run_json(capsys, "erratum", path)
    assert code == 2
    assert (doc["line"], doc["column"]) == (3, 6)
    assert "[PARSE]" in err


def test_erratum_non_utf8_file(capsys, tmp_path):
    path = tmp_path / "latin.rank1"
    path.write_bytes(b"rank1 1 q\nx: \xff\xfe\na: 1\nb: 1\n")
    code, doc, err = run_json(capsys, "erratum", str(path))
    assert code == 2
    assert doc["command"] == "erratum"
    assert (doc["line"], doc["column"]) == (2, 4)
    assert "UTF-8" in doc["error"]


def test_erratum_missing_file(capsys, tmp_path):
    code, doc, _ = run_json(capsys, "erratum", str(tmp_path / "nope.rank1"))
    assert code == 2
    assert "cannot read" in doc["error"]


# ============================================================
# fscheck
# ============================================================
def test_fscheck_origin(capsys):
    code, doc, _ = run_json(capsys, "fscheck", "--n", "1", "--points", "1", "--step", "1e-4")
    assert code == 0
    assert doc["summary"]["passed"] is True
    assert doc["reports"][0]["estimated_constant"] == pytest.approx(2.0, abs=1e-6)
    assert doc["reports"][0]["point"]["z"] == ["0.0+0.0i"]


def test_fscheck_with_point_file(capsys, write):
    path = write("p.chart", "chart 2\n0.3+0.0i 0.7-0.2i\n")
    code, doc, _ = run_json(capsys, "fscheck", "--n", "2", "--points", "2", "--point", path)
    assert code == 0
    assert doc["summary"]["points"] == 3
    assert doc["reports"][-1]["point"]["z"] == ["0.3+0.0i", "0.7-0.2i"]


@pytest.mark.parametrize("argv", [
    ["fscheck", "--step", "0"],
    ["fscheck", "--n", "0"],
    ["fscheck", "--points", "0"],
])
def test_fscheck_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_fscheck_point_dimension_mismatch(capsys, write):
    path = write("p.chart", "chart 1\n0.5+0.5i\n")
    code, _, _ = run(capsys, "fscheck", "--n", "2", "--point", path)
    assert code == 2


# ============================================================
# bench
# ============================================================
def test_bench_small(capsys):
    code, doc, _ = run_json(capsys, "bench", "--sizes", "1,8,32", "--repeats", "1")
    assert code == 0
    assert doc["sizes"] == [1, 8, 32]
    assert len(doc["speedups"]) == 3


@pytest.mark.parametrize("sizes", ["0", "a,b", ""])
def test_bench_bad_sizes(capsys, sizes):
    code, _, _ = run(capsys, "bench", "--sizes", sizes)
    assert code == 2


def test_bench_disagreement_exits_1(capsys, monkeypatch):
    monkeypatch.setattr(bench, "logdet_dense_float", lambda m: (-1, 0.0))
    code, doc, err = run_json(capsys, "bench", "--sizes", "4", "--repeats", "1")
    assert code == 1
    assert doc["error"].startswith("[AGREE]")
    assert "bench aborted" in err


# ============================================================
# det
# ============================================================
def test_det_dense_file(capsys, write):
    path = write("m.dense", "dense 2 q\n3 4\n6 7\n")
    code, doc, _ = run_json(capsys, "det", path)
    assert code == 0
    assert doc["dense"] == "-3"
    assert doc["cofactor"] == "-3"


def test_det_rank1_file(capsys, write):
    path = write("s.rank1", "rank1 2 q\nx: 3 8\na: 1 2\nb: 3 4\n")
    code, doc, _ = run_json(capsys, "det", path)
    assert code == 0
    assert doc["corrected_path"] == "fallback"
    assert doc["corrected"] == doc["division_free"] == doc["dense"] == "0"


def test_det_unknown_header(capsys, write):
    path = write("x.txt", "chart 1\n0+0i\n")
    code, doc, _ = run_json(capsys, "det", path)
    assert code == 2
    assert doc["line"] == 1


# ============================================================
# global options
# ============================================================
def test_pretty_goes_to_stderr(capsys):
    code, out, err = run(capsys, "--pretty", "erratum")
    assert code == 0
    json.loads(out)
    assert "ERRATUM" in err
    assert "-192/35" in err


def test_log_level_option(capsys):
    code, _, err = run(capsys, "--log-level", "info", "erratum")
    assert code == 0
    assert "erratum: start" in err


def test_bad_log_level(capsys):
    code, _, _ = run(capsys, "--log-level", "loud", "erratum")
    assert code == 2


def test_missing_or_unknown_command(capsys):
    code, doc, _ = run_json(capsys)
    assert code == 2
    assert doc["command"] is None and "[USAGE]" in doc["error"]
    code, doc, _ = run_json(capsys, "frobnicate")
    assert code == 2
    assert "invalid choice" in doc["error"]


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0
