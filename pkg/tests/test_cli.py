import csv
import io
import json
from fractions import Fraction

import pytest

from taylorstab import cli
from taylorstab.exactnum import max_precision


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_parse_range():
    assert cli.parse_range("1..4,8") == [1, 2, 3, 4, 8]
    assert cli.parse_range("3, 3") == [3]
    for bad in ("0", "5..2", ""):
        with pytest.raises(Exception):
            cli.parse_range(bad)


def test_parse_span_and_tol():
    assert cli.parse_span("0..1/2") == (Fraction(0), Fraction(1, 2))
    assert cli.parse_tol("1/1000000") == Fraction(1, 10**6)
    with pytest.raises(Exception):
        cli.parse_tol("0")


def test_usage_errors_exit_3(capsys):
    for argv in (["tables", "--n", "0"], ["nope"], ["--precision-bits", "8", "slices"], ["--jobs", "0", "slices"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == cli.EXIT_USAGE
    capsys.readouterr()


def test_slices_csv(capsys):
    code, out, _ = run(capsys, "slices", "--n", "3,4,8")
    assert code == 0
    r = rows(out)
    assert r[0] == ["n", "k", "lo", "hi", "degenerate"]
    last = {int(row[0]): row for row in r[1:]}
    assert last[3][3] == "1.73205080757"
    assert last[4][3] == "2.82842712475"
    assert last[8][3] == "3.39514022057"


def test_slices_svg_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert cli.main(["--format", "svg", "-o", str(a), "slices", "--n", "1..12", "--overlay-o3"]) == 0
    assert cli.main(["--format", "svg", "-o", str(b), "slices", "--n", "1..12", "--overlay-o3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("<svg")


def test_tables_cache_roundtrip(capsys, tmp_path):
    argv = ["--cache-dir", str(tmp_path), "tables", "--n", "1,2"]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    assert len(list(tmp_path.glob("*.json"))) == 2
    code, second, _ = run(capsys, *argv)
    assert first == second
    r = rows(first)
    assert r[0][:6] == ["n", "status", "lo", "hi", "display", "certain"]
    assert r[1][4] == "2" and r[2][4] == "1.099"


def test_tables_semidisk(capsys):
    code, out, _ = run(capsys, "tables", "--mode", "semidisk", "--n", "3,5")
    assert code == 0
    r = rows(out)
    assert r[0][-1] == "n_rho"
    by_n = {row[0]: row for row in r[1:]}
    assert by_n["3"][4] == "0.577"
    assert by_n["5"][1] == "not_applicable"


def test_trace_csv(capsys):
    code, out, _ = run(capsys, "trace", "--n", "1", "--ys", "0,1/2")
    assert code == 0
    r = rows(out)
    assert r[0] == ["n", "y", "sign", "log10_abs_x"]
    assert r[1][3] == "-inf"


def test_radial_and_zeros_and_contours(capsys):
    code, out, _ = run(capsys, "radial", "--n", "3", "--directions", "5")
    assert code == 0 and rows(out)[0] == ["phi", "global_max", "origin_max"]
    code, out, _ = run(capsys, "zeros", "--n", "5")
    assert code == 0 and len(rows(out)) == 6
    code, out, _ = run(capsys, "zeros", "--fm", "2")
    assert code == 0 and rows(out)[0] == ["re", "im"]
    code, out, _ = run(capsys, "szego-contours", "--levels", "1", "--points", "12")
    assert code == 0 and rows(out)[0] == ["x", "y", "level"]


def test_verify_command(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--checks", "lemma-5.1,thm-3.2", "--report", str(report))
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["Pass"] == 2
    assert json.loads(report.read_text()) == doc
    code, _, _ = run(capsys, "verify", "--checks", "bogus")
    assert code == cli.EXIT_USAGE


def test_precision_cap_is_restored(capsys):
    before = max_precision()
    run(capsys, "--precision-bits", "128", "slices", "--n", "3")
    assert max_precision() == before


def test_cache_key_depends_on_precision(tmp_path):
    c = cli.Cache(tmp_path)
    k1 = c.key("tables", {"n": 1})
    from taylorstab.exactnum import set_max_precision

    old = set_max_precision(256)
    try:
        assert c.key("tables", {"n": 1}) != k1
    finally:
        set_max_precision(old)
