import json
import math

import pytest

from cuspcorr.errors import NumericsError
from cuspcorr.report import (ExperimentReport, dumps_canonical, format_float,
                             read_report, write_csv, write_report)


def test_float_formatting_roundtrip():
    for x in (0.1, 1 / 3, 2.0 ** -52, 1e300, -0.0, 123456.789):
        assert float(format_float(x)) == x


def test_nan_forbidden():
    with pytest.raises(NumericsError):
        format_float(float("nan"))
    with pytest.raises(NumericsError):
        dumps_canonical({"x": float("inf")})


def test_empty_report(tmp_path):
    rep = ExperimentReport(config={}, results={})
    p = tmp_path / "empty.json"
    write_report(rep, p, "json")
    doc = read_report(p)
    assert doc["results"] == {}
    assert doc["provenance"]["package"] == "cuspcorr"
    pc = tmp_path / "empty.csv"
    write_report(rep, pc, "csv")
    assert pc.read_text() == "\n"


def test_roundtrip_equality(tmp_path):
    rep = ExperimentReport(config={"X": 100, "seed": 7}, results={"v": 1 / 7, "c": 3},
                           tables={"rows": [{"n": 1, "x": 0.25}]})
    p = tmp_path / "r.json"
    write_report(rep, p, "json")
    doc = read_report(p)
    assert doc["results"]["v"] == 1 / 7
    assert doc["tables"]["rows"][0]["x"] == 0.25
    assert doc["config"] == {"X": 100, "seed": 7}


def test_byte_identical_reruns(tmp_path):
    def make():
        return ExperimentReport(config={"seed": 1}, results={"a": math.pi, "b": -1.5e-8})
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    write_report(make(), p1, "json")
    write_report(make(), p2, "json")
    assert p1.read_bytes() == p2.read_bytes()


def test_complex_serialization():
    s = dumps_canonical({"z": complex(1.5, -2.0)})
    doc = json.loads(s)
    assert doc["z"] == {"re": 1.5, "im": -2.0}


def test_csv_header_always_present(tmp_path):
    p = tmp_path / "t.csv"
    write_csv(p, [], columns=["a", "b"])
    assert p.read_text() == "a,b\n"
