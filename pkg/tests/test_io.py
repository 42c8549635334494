import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from topalign.errors import ParseError
from topalign.filtration import PersistenceDiagram
from topalign.geometry import PointCloud
from topalign.io import (
    dumps,
    fmt_float,
    read_diagrams,
    read_embeddings,
    write_diagrams,
    write_embeddings_csv,
    write_topa,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=200)
@given(finite)
def test_float_format_round_trips(x):
    assert float(fmt_float(x)) == x


def test_fmt_float_infinity():
    assert fmt_float(math.inf) == "inf" and fmt_float(-math.inf) == "-inf"


def test_dumps_is_valid_json_and_lossless():
    obj = {"a": 0.1 + 0.2, "b": [1, 2.5, None, True], "c": np.float64(1 / 3), "d": math.inf, "e": np.arange(2)}
    back = json.loads(dumps(obj))
    assert back["a"] == 0.1 + 0.2 and back["c"] == 1 / 3
    assert back["d"] == "inf" and back["e"] == [0, 1] and back["b"][3] is True


def test_csv_round_trip_with_labels(tmp_path):
    rng = np.random.default_rng(0)
    cloud = PointCloud(rng.standard_normal((7, 3)), labels=[f"p{i}" for i in range(7)])
    write_embeddings_csv(tmp_path / "e.csv", cloud)
    back = read_embeddings(tmp_path / "e.csv")
    assert np.array_equal(back.points, cloud.points) and back.labels == cloud.labels


def test_csv_without_header(tmp_path):
    (tmp_path / "e.csv").write_text("1,2\n3,4\n\n")
    assert read_embeddings(tmp_path / "e.csv").points.tolist() == [[1, 2], [3, 4]]


@pytest.mark.parametrize(
    "text, where",
    [("1,2\n3\n", "line 2"), ("x0,x1\n1,2\n1,zz\n", "line 3"), ("", "line 1"), ("1,nan\n", "line 1"), ("a,b\n", "line 1")],
)
def test_csv_errors_name_the_line(tmp_path, text, where):
    (tmp_path / "e.csv").write_text(text)
    with pytest.raises(ParseError) as exc:
        read_embeddings(tmp_path / "e.csv")
    assert exc.value.location == where


def test_topa_round_trip(tmp_path):
    pts = np.random.default_rng(1).standard_normal((5, 4))
    write_topa(tmp_path / "e.topa", pts)
    data = (tmp_path / "e.topa").read_bytes()
    assert data[:4] == b"TOPA" and len(data) == 16 + 5 * 4 * 8
    assert np.array_equal(read_embeddings(tmp_path / "e.topa").points, pts)


def test_topa_errors_name_offsets(tmp_path):
    write_topa(tmp_path / "e.topa", np.ones((2, 2)))
    data = bytearray((tmp_path / "e.topa").read_bytes())
    (tmp_path / "short.topa").write_bytes(bytes(data[:-3]))
    with pytest.raises(ParseError) as exc:
        read_embeddings(tmp_path / "short.topa")
    assert exc.value.location == "offset 16"
    data[16 + 8 * 3: 16 + 8 * 4] = np.array([np.inf]).tobytes()
    (tmp_path / "inf.topa").write_bytes(bytes(data))
    with pytest.raises(ParseError) as exc:
        read_embeddings(tmp_path / "inf.topa")
    assert exc.value.location == "offset 40"


def test_diagram_round_trip(tmp_path):
    d0 = PersistenceDiagram(0, [[0, 0.1 + 0.2], [0, 1 / 3], [0, math.inf]])
    d1 = PersistenceDiagram(1, [[0.7, math.inf]])
    write_diagrams(tmp_path / "d.csv", [d0, d1])
    back = read_diagrams(tmp_path / "d.csv")
    assert back[0].same_multiset(d0) and back[1].same_multiset(d1)
    assert back[0].includes_essential


@pytest.mark.parametrize("body", ["0,1,0.5\n", "0,a,1\n", "x,0,1\n", "0,0\n", "0,inf,inf\n"])
def test_diagram_parse_errors(tmp_path, body):
    (tmp_path / "d.csv").write_text("dimension,birth,death\n" + body)
    with pytest.raises(ParseError) as exc:
        read_diagrams(tmp_path / "d.csv")
    assert exc.value.location == "line 2"


def test_diagram_header_required(tmp_path):
    (tmp_path / "d.csv").write_text("0,0,1\n")
    with pytest.raises(ParseError):
        read_diagrams(tmp_path / "d.csv")
