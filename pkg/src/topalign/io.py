"""File formats for embeddings and diagrams, plus JSON with 17 significant digits.

Embeddings come as CSV (one row per point, optional ``label`` first column
announced by the header) or as the binary ``TOPA`` layout: magic ``b"TOPA"``,
``<III`` version/rows/cols, then rows*cols little-endian float64, row-major.
"""
from __future__ import annotations

import csv
import io
import json
import math
import struct
from pathlib import Path

import numpy as np

from .errors import ParseError
from .filtration import PersistenceDiagram, WeightedGraph
from .geometry import PointCloud

MAGIC = b"TOPA"
HEADER = struct.Struct("<III")
TOPA_VERSION = 1


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _parse_float(text, path, where):
    try:
        return float(text)
    except ValueError:
        raise ParseError(path, where, f"not a number: {text!r}") from None


def read_embeddings(path) -> PointCloud:
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC:
        return read_topa(path)
    return read_embeddings_csv(path)


def _is_numeric_row(row) -> bool:
    try:
        [float(c) for c in row]
    except ValueError:
        return False
    return True


def read_embeddings_csv(path) -> PointCloud:
    with open(path, newline="") as fh:
        lines = [(i, row) for i, row in enumerate(csv.reader(fh), start=1) if any(c.strip() for c in row)]
    if not lines:
        raise ParseError(path, "line 1", "empty file")
    first = lines[0][1]
    has_label = first[0].strip() == "label"
    if has_label or not _is_numeric_row(first):
        width = len(first) - 1 if has_label else len(first)
        lines = lines[1:]
    else:
        width = len(first)
    rows, labels = [], []
    for lineno, row in lines:
        if has_label:
            labels.append(row[0])
            row = row[1:]
        if len(row) != width:
            raise ParseError(path, f"line {lineno}", f"expected {width} values, got {len(row)}")
        vals = [_parse_float(c, path, f"line {lineno}") for c in row]
        if not all(math.isfinite(x) for x in vals):
            raise ParseError(path, f"line {lineno}", "non-finite coordinate")
        rows.append(vals)
    if not rows:
        raise ParseError(path, f"line {lines[0][0] if lines else 1}", "no data rows")
    return PointCloud(np.array(rows, dtype=np.float64), labels if has_label else None)


def write_embeddings_csv(path, cloud: PointCloud):
    pts = cloud.points
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        cols = [f"x{j}" for j in range(pts.shape[1])]
        w.writerow(["label", *cols] if cloud.labels is not None else cols)
        for i, row in enumerate(pts):
            cells = [fmt_float(x) for x in row]
            w.writerow([cloud.labels[i], *cells] if cloud.labels is not None else cells)


def read_topa(path) -> PointCloud:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise ParseError(path, "offset 0", "bad magic, expected TOPA")
    if len(data) < 4 + HEADER.size:
        raise ParseError(path, "offset 4", "truncated header")
    version, rows, cols = HEADER.unpack_from(data, 4)
    if version != TOPA_VERSION:
        raise ParseError(path, "offset 4", f"unsupported version {version}")
    start = 4 + HEADER.size
    need = rows * cols * 8
    if len(data) - start != need:
        raise ParseError(path, f"offset {start}", f"expected {need} payload bytes, found {len(data) - start}")
    pts = np.frombuffer(data, dtype="<f8", offset=start).reshape(rows, cols).astype(np.float64)
    if not np.all(np.isfinite(pts)):
        bad = int(np.argwhere(~np.isfinite(pts.ravel()))[0][0])
        raise ParseError(path, f"offset {start + 8 * bad}", "non-finite coordinate")
    return PointCloud(pts)


def write_topa(path, cloud) -> None:
    pts = np.ascontiguousarray(cloud.points if isinstance(cloud, PointCloud) else cloud, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(HEADER.pack(TOPA_VERSION, pts.shape[0], pts.shape[1]))
        fh.write(pts.tobytes())


def diagram_rows(diagrams) -> str:
    buf = io.StringIO()
    buf.write("dimension,birth,death\n")
    for d in diagrams:
        for b, de in d.points:
            buf.write(f"{d.dimension},{fmt_float(b)},{fmt_float(de)}\n")
    return buf.getvalue()


def write_diagrams(path, diagrams) -> None:
    if isinstance(diagrams, PersistenceDiagram):
        diagrams = [diagrams]
    Path(path).write_text(diagram_rows(diagrams))


def read_diagrams(path) -> dict[int, PersistenceDiagram]:
    """Diagrams keyed by dimension; ``inf`` deaths mark essential classes."""
    by_dim: dict[int, list] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["dimension", "birth", "death"]:
            raise ParseError(path, "line 1", "expected header dimension,birth,death")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(path, f"line {lineno}", f"expected 3 fields, got {len(row)}")
            try:
                dim = int(row[0])
            except ValueError:
                raise ParseError(path, f"line {lineno}", f"bad dimension {row[0]!r}") from None
            b = _parse_float(row[1], path, f"line {lineno}")
            d = _parse_float(row[2], path, f"line {lineno}")
            if math.isnan(b) or math.isnan(d) or d < b or math.isinf(b):
                raise ParseError(path, f"line {lineno}", "need finite birth <= death")
            by_dim.setdefault(dim, []).append((b, d))
    return {
        dim: PersistenceDiagram(dim, np.array(pts), includes_essential=any(math.isinf(d) for _, d in pts))
        for dim, pts in by_dim.items()
    }


def write_graph(path, g: WeightedGraph) -> None:
    with open(path, "w") as fh:
        fh.write("u,v,w\n")
        for a, b, w in g.edges():
            fh.write(f"{a},{b},{fmt_float(w)}\n")


def _encode(obj):
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return json.dumps(str(x))  # JSON has no inf/nan
        return fmt_float(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with every float written at 17 significant digits."""
    return _encode(obj)
