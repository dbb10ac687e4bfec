"""File formats: feature ingestion, graph dumps, and CSV exports.

Features arrive either as CSV (one row per point, optional final integer
label column, optional header line) or as a raw binary block: magic
"GBAL", u32 version, u64 n_points, u64 dim, then little-endian float32
values in row-major order. Graphs serialize to a companion binary format
under the magic "GBAG" carrying the CSR arrays of both the weight and
edge-length matrices.
"""

from __future__ import annotations

import csv
import struct

import numpy as np
from scipy import sparse

from .graph import SimilarityGraph
from .laplace import predict_labels
from .validation import check_features, check_labels

__all__ = [
    "FEATURES_MAGIC",
    "GRAPH_MAGIC",
    "load_features_csv",
    "load_labels_csv",
    "save_features_binary",
    "load_features_binary",
    "load_features",
    "save_graph",
    "load_graph",
    "export_prediction_csv",
    "export_acquisition_csv",
]

FEATURES_MAGIC = b"GBAL"
GRAPH_MAGIC = b"GBAG"
_VERSION = 1


def _is_float_row(fields):
    try:
        [float(f) for f in fields]
        return True
    except ValueError:
        return False


def _read_csv_rows(path):
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError(f"{path} is empty")
    if not _is_float_row(rows[0]):
        rows = rows[1:]  # header line
        if not rows:
            raise ValueError(f"{path} contains only a header")
    data = np.array([[float(f) for f in row] for row in rows])
    if data.ndim != 2:
        raise ValueError(f"{path} rows have inconsistent lengths")
    return data


def load_features_csv(path, with_labels="auto"):
    """Read a feature CSV, optionally splitting a final label column.

    Parameters
    ----------
    path : str or Path
    with_labels : {"auto", True, False}
        "auto" treats the last column as labels when it is entirely
        made of nonnegative integers and at least one other column is not.

    Returns
    -------
    (X, y) where y is None when no label column is present.
    """
    data = _read_csv_rows(path)
    if with_labels == "auto":
        if data.shape[1] >= 2:
            last = data[:, -1]
            rest = data[:, :-1]
            last_integral = np.all(last == np.floor(last)) and np.all(last >= 0)
            rest_integral = np.all(rest == np.floor(rest))
            with_labels = bool(last_integral and not rest_integral)
        else:
            with_labels = False
    if with_labels:
        if data.shape[1] < 2:
            raise ValueError("label column requested but only one column present")
        X = check_features(data[:, :-1])
        y = check_labels(data[:, -1], X.shape[0])
        return X, y
    return check_features(data), None


def load_labels_csv(path, n_points=None):
    """Read a label vector: one integer per row (a final column wins when
    several are present)."""
    data = _read_csv_rows(path)
    y = data[:, -1]
    return check_labels(y, n_points if n_points is not None else y.shape[0])


def save_features_binary(path, X):
    """Write features in the raw binary layout (float32, row-major)."""
    X = check_features(X)
    with open(path, "wb") as fh:
        fh.write(FEATURES_MAGIC)
        fh.write(struct.pack("<IQQ", _VERSION, X.shape[0], X.shape[1]))
        fh.write(X.astype("<f4").tobytes(order="C"))


def load_features_binary(path):
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != FEATURES_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        version, n, d = struct.unpack("<IQQ", fh.read(4 + 8 + 8))
        if version != _VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        raw = fh.read(n * d * 4)
    if len(raw) != n * d * 4:
        raise ValueError(f"{path}: truncated payload")
    X = np.frombuffer(raw, dtype="<f4").reshape(n, d).astype(np.float64)
    return check_features(X)


def load_features(path, with_labels="auto"):
    """Dispatch on content: binary when the magic matches, CSV otherwise.

    Returns (X, y-or-None).
    """
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == FEATURES_MAGIC:
        return load_features_binary(path), None
    return load_features_csv(path, with_labels=with_labels)


def _write_array(fh, arr):
    fh.write(struct.pack("<cQ", arr.dtype.char.encode(), arr.size))
    fh.write(arr.tobytes(order="C"))


def _read_array(fh):
    char, size = struct.unpack("<cQ", fh.read(1 + 8))
    dtype = np.dtype(char.decode()).newbyteorder("<")
    raw = fh.read(size * dtype.itemsize)
    if len(raw) != size * dtype.itemsize:
        raise ValueError("truncated graph dump")
    return np.frombuffer(raw, dtype=dtype)


def save_graph(path, graph):
    """Serialize a SimilarityGraph (CSR weights + aligned edge lengths)."""
    w, ln = graph.weights, graph.lengths
    metric = graph.metric.encode()
    with open(path, "wb") as fh:
        fh.write(GRAPH_MAGIC)
        fh.write(struct.pack("<IQQH", _VERSION, graph.n_nodes, graph.k,
                             len(metric)))
        fh.write(metric)
        _write_array(fh, w.indptr.astype("<u8"))
        _write_array(fh, w.indices.astype("<u8"))
        _write_array(fh, w.data.astype("<f8"))
        _write_array(fh, ln.data.astype("<f8"))


def load_graph(path):
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != GRAPH_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        version, n, k, mlen = struct.unpack("<IQQH", fh.read(4 + 8 + 8 + 2))
        if version != _VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        metric = fh.read(mlen).decode()
        indptr = _read_array(fh).astype(np.int64)
        indices = _read_array(fh).astype(np.int64)
        wdata = _read_array(fh).astype(np.float64)
        ldata = _read_array(fh).astype(np.float64)
    weights = sparse.csr_matrix((wdata, indices.copy(), indptr.copy()),
                                shape=(n, n))
    lengths = sparse.csr_matrix((ldata, indices.copy(), indptr.copy()),
                                shape=(n, n))
    return SimilarityGraph(weights=weights, lengths=lengths, k=int(k),
                           metric=metric)


def export_prediction_csv(path, pred):
    """Write (id, per-class scores, predicted label) rows with a header."""
    labels = predict_labels(pred)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id"] + [f"score_{c}" for c in range(pred.n_classes)]
                        + ["label"])
        for i in range(pred.n_nodes):
            writer.writerow([i] + [repr(float(s)) for s in pred.scores[i]]
                            + [int(labels[i])])


def export_acquisition_csv(path, acq):
    """Write (id, value) rows with a header."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "value"])
        for i, v in zip(acq.ids, acq.values):
            writer.writerow([int(i), repr(float(v))])
