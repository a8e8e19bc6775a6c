import json

import numpy as np
import pytest

from topotrack.io import (DataError, read_signal_matrix, read_table, write_json,
                          write_signal_matrix, write_table, zscore_columns)


def test_signal_roundtrip(tmp_path, rng):
    X = rng.standard_normal((7, 4))
    write_signal_matrix(tmp_path / "s.csv", X)
    Y, names = read_signal_matrix(tmp_path / "s.csv")
    np.testing.assert_array_equal(X, Y)
    assert names == ["ch1", "ch2", "ch3", "ch4"]


def test_headerless_file(tmp_path):
    (tmp_path / "s.csv").write_text("1,2,3\n4,5,6\n\n")
    X, names = read_signal_matrix(tmp_path / "s.csv")
    assert X.shape == (2, 3) and names == ["ch1", "ch2", "ch3"]


@pytest.mark.parametrize("content,fragment", [
    ("a,b\n1,2\n3\n", "row 3 has 1 columns, expected 2"),
    ("a,b\n1,2\n3,x\n", "row 3, column 2: 'x' is not a number"),
    ("a,b\n1,nan\n", "row 2, column 2: non-finite"),
    ("", "file is empty"),
    ("a,b\n", "no data rows"),
    ("a\n1\n", "at least two channels"),
])
def test_malformed_signal_files(tmp_path, content, fragment):
    p = tmp_path / "bad.csv"
    p.write_text(content)
    with pytest.raises(DataError) as info:
        read_signal_matrix(p)
    assert fragment in str(info.value) and "bad.csv" in str(info.value)


def test_missing_signal_file(tmp_path):
    with pytest.raises(DataError):
        read_signal_matrix(tmp_path / "nope.csv")


def test_zscore():
    X = np.array([[1.0, 5.0], [3.0, 5.0]])
    Z = zscore_columns(X)
    np.testing.assert_allclose(Z, [[-1, 0], [1, 0]])


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_table_roundtrip(tmp_path, fmt):
    rows = [(1, "dpg", 0.5, float("nan")), (2, "primal_pg", 1.25, 3.0)]
    path = write_table(tmp_path / "t", ("t", "method", "error", "f"), rows, fmt)
    assert path.suffix == "." + fmt
    cols = read_table(path)
    assert cols["t"] == [1.0, 2.0] and cols["method"] == ["dpg", "primal_pg"]
    assert np.isnan(cols["f"][0]) and cols["f"][1] == 3.0
    with pytest.raises(ValueError):
        write_table(tmp_path / "t", ("a",), [], "xml")


def test_float_repr_is_exact(tmp_path):
    v = 0.1 + 0.2
    path = write_table(tmp_path / "t", ("x",), [(v,)])
    assert read_table(path)["x"] == [v]


def test_write_json_sorted(tmp_path):
    write_json(tmp_path / "a.json", {"b": 1, "a": 2})
    text = (tmp_path / "a.json").read_text()
    assert text.index('"a"') < text.index('"b"') and json.loads(text) == {"a": 2, "b": 1}
