"""CSV and binary round trips."""

import csv

import numpy as np
import pytest

from gbal.acquisition import AcquisitionVector
from gbal.graph import build_similarity_graph
from gbal.io import (export_acquisition_csv, export_prediction_csv,
                     load_features, load_features_binary, load_features_csv,
                     load_graph, load_labels_csv, save_features_binary,
                     save_graph)
from gbal.laplace import Prediction


def write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)


def test_features_csv_with_header(tmp_path):
    path = tmp_path / "data.csv"
    write_csv(path, [["x0", "x1"], [0.5, 1.5], [2.25, -3.0]])
    X, y = load_features_csv(path)
    assert np.array_equal(X, [[0.5, 1.5], [2.25, -3.0]])
    assert y is None


def test_features_csv_autodetects_label_column(tmp_path):
    path = tmp_path / "data.csv"
    write_csv(path, [[0.5, 1.5, 0], [2.25, -3.0, 1], [0.1, 0.2, 1]])
    X, y = load_features_csv(path)
    assert X.shape == (3, 2)
    assert np.array_equal(y, [0, 1, 1])
    # all-integer features: last column is not singled out
    path2 = tmp_path / "ints.csv"
    write_csv(path2, [[1, 2, 0], [3, 4, 1]])
    X2, y2 = load_features_csv(path2)
    assert X2.shape == (2, 3) and y2 is None
    # explicit override wins
    X3, y3 = load_features_csv(path2, with_labels=True)
    assert X3.shape == (2, 2) and np.array_equal(y3, [0, 1])


def test_features_csv_rejects_bad_files(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ValueError):
        load_features_csv(empty)
    header_only = tmp_path / "h.csv"
    header_only.write_text("x0,x1\n")
    with pytest.raises(ValueError):
        load_features_csv(header_only)


def test_labels_csv(tmp_path):
    path = tmp_path / "labels.csv"
    write_csv(path, [["class"], [1], [0], [2]])
    assert np.array_equal(load_labels_csv(path), [1, 0, 2])
    with pytest.raises(ValueError):
        load_labels_csv(path, n_points=5)


def test_binary_features_round_trip(tmp_path):
    path = tmp_path / "feat.bin"
    X = np.random.default_rng(0).normal(size=(37, 5))
    save_features_binary(path, X)
    back = load_features_binary(path)
    assert back.shape == X.shape
    # float32 storage: round trip at single precision
    assert np.allclose(back, X, atol=1e-6)
    # dispatcher recognizes the magic
    auto, y = load_features(path)
    assert np.array_equal(auto, back) and y is None


def test_binary_features_detects_corruption(tmp_path):
    path = tmp_path / "feat.bin"
    save_features_binary(path, np.ones((4, 2)))
    raw = path.read_bytes()
    (tmp_path / "trunc.bin").write_bytes(raw[:-3])
    with pytest.raises(ValueError):
        load_features_binary(tmp_path / "trunc.bin")
    (tmp_path / "magic.bin").write_bytes(b"XXXX" + raw[4:])
    with pytest.raises(ValueError):
        load_features_binary(tmp_path / "magic.bin")


def test_graph_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(2)
    X = rng.normal(size=(60, 4))
    graph = build_similarity_graph(X, k=5, method="brute",
                                   warn_disconnected=False)
    path = tmp_path / "graph.bin"
    save_graph(path, graph)
    back = load_graph(path)
    assert back.k == graph.k and back.metric == graph.metric
    assert np.array_equal(back.weights.indptr, graph.weights.indptr)
    assert np.array_equal(back.weights.indices, graph.weights.indices)
    assert np.array_equal(back.weights.data, graph.weights.data)
    assert np.array_equal(back.lengths.data, graph.lengths.data)


def test_graph_load_rejects_feature_file(tmp_path):
    path = tmp_path / "feat.bin"
    save_features_binary(path, np.ones((4, 2)))
    with pytest.raises(ValueError):
        load_graph(path)


def test_prediction_export(tmp_path):
    pred = Prediction(scores=np.array([[0.25, 0.75], [1.0, 0.0]]),
                      labeled=np.array([1]))
    path = tmp_path / "pred.csv"
    export_prediction_csv(path, pred)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["id", "score_0", "score_1", "label"]
    assert rows[1] == ["0", "0.25", "0.75", "1"]
    assert rows[2] == ["1", "1.0", "0.0", "0"]


def test_acquisition_export_keeps_full_precision(tmp_path):
    value = 1.0 / 3.0
    acq = AcquisitionVector(ids=np.array([7]), values=np.array([value]))
    path = tmp_path / "acq.csv"
    export_acquisition_csv(path, acq)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[1][0] == "7"
    assert float(rows[1][1]) == value
