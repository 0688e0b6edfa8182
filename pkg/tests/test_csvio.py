import io
import json
import math

import numpy as np
import pytest

from stylized_facts import InputError, InvalidPrice
from stylized_facts import csvio


def write(tmp_path, text, name="in.csv"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_timestamp_forms():
    assert csvio.parse_timestamp("1364688000") == 1364688000.0
    assert csvio.parse_timestamp("2013-03-31T00:00:00") == 1364688000.0
    assert csvio.parse_timestamp("2013-03-31T02:00:00+02:00") == 1364688000.0
    assert csvio.parse_timestamp("2013-03-31T00:00:00Z") == 1364688000.0
    with pytest.raises(ValueError):
        csvio.parse_timestamp("yesterday")


def test_read_ticks_header_comments_and_volume(tmp_path):
    path = write(tmp_path, "timestamp,price,volume\n# note\n0,100,1.5\n\n7000,110,2\n")
    ticks = csvio.read_ticks(path)
    np.testing.assert_array_equal(ticks.timestamps, [0, 7000])
    np.testing.assert_array_equal(ticks.volumes, [1.5, 2])
    assert csvio.read_ticks(io.StringIO("0,1\n5,2\n")).volumes is None


def test_read_ticks_rejects_bad_rows(tmp_path):
    with pytest.raises(InvalidPrice) as err:
        csvio.read_ticks(write(tmp_path, "0,1\n1,2\n2,0\n"))
    assert err.value.line == 3
    with pytest.raises(InputError) as err:
        csvio.read_ticks(write(tmp_path, "0,1\nfoo,2\n"))
    assert err.value.line == 2
    with pytest.raises(InputError):
        csvio.read_ticks(write(tmp_path, "0\n"))
    with pytest.raises(InputError):
        csvio.read_ticks(write(tmp_path, "# nothing\n"))
    with pytest.raises(InputError):
        csvio.read_ticks(str(tmp_path / "missing.csv"))


def test_read_returns_requires_regular_grid(tmp_path):
    r = csvio.read_returns(write(tmp_path, "t,r\n300,0.1\n600,-0.2\n900,0.0\n"))
    assert (r.delta_t, r.start_time) == (300, 300)
    with pytest.raises(InputError) as err:
        csvio.read_returns(write(tmp_path, "300,0.1\n600,-0.2\n1000,0.0\n"))
    assert err.value.line == 3
    with pytest.raises(InputError):
        csvio.read_returns(write(tmp_path, "300,0.1\n600,nan\n"))


def test_read_events(tmp_path):
    ev = csvio.read_events(write(tmp_path, "timestamp,label\n2014-02-01,gox\n100,other\n"))
    assert ev == [(1391212800.0, "gox"), (100.0, "other")]


def test_validate_clean_file(tmp_path):
    rep = csvio.validate_input(write(tmp_path, "0,100\n3600,101\n7200,102\n"), "ticks", 3600)
    assert rep["rows"] == 3
    assert rep["violations"] == []
    assert rep["grid_points"] == 3
    assert rep["gap_stats"]["median"] == 3600


def test_validate_reports_line_numbers(tmp_path):
    lines = ["timestamp,price"] + [f"{i * 60},{100 + i}" for i in range(8)]
    lines[6] = "300,-1"
    lines[3] = "60,102"
    path = write(tmp_path, "\n".join(lines) + "\n")
    before = open(path).read()
    rep = csvio.validate_input(path, "ticks")
    kinds = {(v["kind"], v["line"]) for v in rep["violations"]}
    assert ("InvalidPrice", 7) in kinds
    assert rep["non_positive_prices"] == 1
    assert rep["duplicate_timestamps"] == 1
    assert open(path).read() == before


def test_validate_irregular_grid(tmp_path):
    rep = csvio.validate_input(write(tmp_path, "0,1\n10,2\n25,3\n"), "prices")
    assert [v["kind"] for v in rep["violations"]] == ["IrregularSpacing"]
    assert rep["violations"][0]["line"] == 3


def test_float_formatting_round_trips():
    for v in (0.1, 1 / 3, -2.5e-300, 123456789.123456789, math.pi):
        assert float(csvio.format_float(v)) == v
    assert csvio.format_float(None) == ""
    assert csvio.format_float(float("nan")) == ""
    assert csvio.format_float(True) == "true"
    assert csvio.format_float(np.int64(3)) == "3"
    assert csvio.format_time(3600.0) == "3600"
    assert csvio.format_time(0.5) == "0.5"


def test_json_writer():
    text = csvio.dumps_json({"a": 0.1, "b": [1, float("nan")], "c": None, "d": {"e": True},
                             "f": np.float64(1 / 3), "g": []})
    back = json.loads(text)
    assert back == {"a": 0.1, "b": [1, None], "c": None, "d": {"e": True}, "f": 1 / 3, "g": []}


def test_csv_text():
    assert csvio.csv_text(("a", "b"), [("x", 0.25), (1, None)]) == "a,b\nx,0.25\n1,\n"
