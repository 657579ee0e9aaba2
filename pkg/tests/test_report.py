import math

from diagcsim.report import fmt, read_csv, write_csv


def test_fmt():
    assert fmt(0.1 + 0.2) == "0.3"
    assert fmt(-0.0) == "0"
    assert fmt(-math.inf) == "-300"
    assert fmt(True) == "1" and fmt(None) == ""
    assert fmt(12) == "12"


def test_roundtrip(tmp_path):
    p = tmp_path / "x.csv"
    write_csv(p, ["a", "b"], [[1, 2.5], [3, None]], "ab" * 32, 9)
    raw = p.read_bytes()
    assert raw.startswith(b"# config_sha256=" + b"ab" * 32 + b" seed=9\n")
    assert b"\r" not in raw
    comment, header, rows = read_csv(p)
    assert header == ["a", "b"] and rows == [["1", "2.5"], ["3", ""]]
