"""Laplace learning against closed-form and dense linear-algebra oracles."""

import numpy as np
import pytest

from gbal.graph import build_similarity_graph
from gbal.laplace import (ConvergenceError, LabelState, LaplaceLearning,
                          Prediction, accuracy, laplace_learning,
                          predict_labels)

from oracles import dense_laplace_solve, graph_from_dense


def path_graph(weights):
    n = len(weights) + 1
    W = np.zeros((n, n))
    for i, w in enumerate(weights):
        W[i, i + 1] = W[i + 1, i] = w
    return graph_from_dense(W)


def test_unit_path_interpolates_linearly():
    # 0 -- 1 -- 2 -- 3, ends labeled: harmonic values are linear in hops
    graph = path_graph([1.0, 1.0, 1.0])
    labels = LabelState(n_classes=2, ids=[0, 3], y=[0, 1])
    pred = laplace_learning(graph, labels)
    expected = np.array([[1, 0], [2 / 3, 1 / 3], [1 / 3, 2 / 3], [0, 1]])
    assert np.allclose(pred.scores, expected, atol=1e-10)


def test_weighted_star_is_weighted_mean():
    # center 0 tied to labeled leaves with weights 2, 1, 1
    W = np.zeros((4, 4))
    W[0, 1] = W[1, 0] = 2.0
    W[0, 2] = W[2, 0] = 1.0
    W[0, 3] = W[3, 0] = 1.0
    graph = graph_from_dense(W)
    labels = LabelState(n_classes=2, ids=[1, 2, 3], y=[0, 1, 1])
    pred = laplace_learning(graph, labels)
    assert np.allclose(pred.scores[0], [0.5, 0.5], atol=1e-10)


def test_labeled_rows_are_exact_one_hot():
    graph = path_graph([0.5, 2.0, 1.0, 0.25])
    labels = LabelState(n_classes=3, ids=[0, 2], y=[2, 0])
    pred = laplace_learning(graph, labels)
    assert np.array_equal(pred.scores[0], [0.0, 0.0, 1.0])
    assert np.array_equal(pred.scores[2], [1.0, 0.0, 0.0])


def test_matches_dense_solver():
    rng = np.random.default_rng(10)
    for _ in range(20):
        n = int(rng.integers(15, 80))
        X = rng.normal(size=(n, 4))
        graph = build_similarity_graph(X, k=min(6, n - 1), method="brute",
                                       warn_disconnected=False)
        n_lab = int(rng.integers(2, max(3, n // 4)))
        ids = rng.choice(n, size=n_lab, replace=False)
        y = rng.integers(0, 3, size=n_lab)
        y[0] = 0
        labels = LabelState(n_classes=3, ids=ids, y=y)
        pred = laplace_learning(graph, labels, tol=1e-10)
        ref = dense_laplace_solve(graph.weights.toarray(), ids, y, 3)
        assert np.allclose(pred.scores, ref, atol=1e-7)


def test_harmonicity_residual_bound():
    rng = np.random.default_rng(11)
    X = rng.normal(size=(120, 5))
    graph = build_similarity_graph(X, k=8, method="brute",
                                   warn_disconnected=False)
    labels = LabelState(n_classes=2, ids=[0, 1, 2, 5], y=[0, 1, 0, 1])
    tol = 1e-8
    pred = laplace_learning(graph, labels, tol=tol)
    W = graph.weights.toarray()
    L = np.diag(W.sum(axis=1)) - W
    residual = L @ pred.scores
    mask = np.ones(120, dtype=bool)
    mask[labels.ids] = False
    assert np.abs(residual[mask]).max() <= 10 * tol


def test_scores_respect_boundary_range():
    rng = np.random.default_rng(12)
    X = rng.normal(size=(90, 3))
    graph = build_similarity_graph(X, k=6, method="brute",
                                   warn_disconnected=False)
    labels = LabelState(n_classes=3, ids=np.arange(6), y=[0, 1, 2, 0, 1, 2])
    pred = laplace_learning(graph, labels)
    assert pred.scores.min() >= -1e-8
    assert pred.scores.max() <= 1 + 1e-8
    assert np.allclose(pred.scores.sum(axis=1), 1.0, atol=1e-6)


def test_all_labeled_short_circuits():
    graph = path_graph([1.0, 1.0])
    labels = LabelState(n_classes=2, ids=[0, 1, 2], y=[1, 0, 1])
    pred = laplace_learning(graph, labels)
    assert np.array_equal(pred.scores, [[0, 1], [1, 0], [0, 1]])


def test_orphan_component_gets_uniform_scores():
    # two disjoint edges, labels only on the first
    W = np.zeros((4, 4))
    W[0, 1] = W[1, 0] = 1.0
    W[2, 3] = W[3, 2] = 1.0
    graph = graph_from_dense(W)
    labels = LabelState(n_classes=2, ids=[0], y=[1])
    with pytest.warns(UserWarning, match="component"):
        pred = laplace_learning(graph, labels)
    assert np.allclose(pred.scores[2], [0.5, 0.5])
    assert np.allclose(pred.scores[3], [0.5, 0.5])
    assert np.allclose(pred.scores[1], [0.0, 1.0])


def test_convergence_error_carries_residual():
    rng = np.random.default_rng(13)
    X = rng.normal(size=(200, 4))
    graph = build_similarity_graph(X, k=8, method="brute",
                                   warn_disconnected=False)
    labels = LabelState(n_classes=2, ids=[0, 1], y=[0, 1])
    with pytest.raises(ConvergenceError) as err:
        laplace_learning(graph, labels, tol=1e-14, max_iter=1)
    assert err.value.residual is not None


def test_warm_start_reaches_same_solution():
    rng = np.random.default_rng(14)
    X = rng.normal(size=(80, 4))
    graph = build_similarity_graph(X, k=6, method="brute",
                                   warn_disconnected=False)
    labels = LabelState(n_classes=2, ids=[0, 1, 2], y=[0, 1, 0])
    cold = laplace_learning(graph, labels, tol=1e-10)
    # perturbed scores from an earlier, smaller label set
    prev = laplace_learning(
        graph, LabelState(n_classes=2, ids=[0, 1], y=[0, 1]), tol=1e-10)
    warm = laplace_learning(graph, labels, tol=1e-10,
                            warm_start=prev.scores)
    assert np.allclose(cold.scores, warm.scores, atol=1e-7)


def test_predict_labels_breaks_ties_low():
    pred = Prediction(scores=np.array([[0.5, 0.5], [0.2, 0.8]]),
                      labeled=np.array([], dtype=np.int64))
    assert np.array_equal(predict_labels(pred), [0, 1])


def test_accuracy_excludes_labeled_nodes():
    scores = np.array([[1.0, 0.0], [0.9, 0.1], [0.2, 0.8]])
    pred = Prediction(scores=scores, labeled=np.array([0]))
    # nodes 1 and 2: predicted (0, 1), truth (1, 1) -> 0.5
    assert accuracy(pred, [0, 1, 1]) == pytest.approx(0.5)
    all_labeled = Prediction(scores=scores, labeled=np.array([0, 1, 2]))
    assert accuracy(all_labeled, [1, 1, 1]) == 1.0


def test_label_state_validation():
    with pytest.raises(ValueError):
        LabelState(n_classes=2, ids=[0, 0], y=[0, 1])
    with pytest.raises(ValueError):
        LabelState(n_classes=2, ids=[0, 1], y=[0, 2])
    with pytest.raises(ValueError):
        LabelState(n_classes=0, ids=[], y=[])


def test_estimator_round_trip():
    rng = np.random.default_rng(15)
    X = rng.normal(size=(60, 4))
    graph = build_similarity_graph(X, k=6, method="brute",
                                   warn_disconnected=False)
    y = np.full(60, -1, dtype=np.int64)
    y[:4] = [0, 1, 0, 1]
    model = LaplaceLearning(tol=1e-9)
    model.fit(graph, y)
    assert model.predict().shape == (60,)
    assert model.predict_proba().shape == (60, 2)
    assert np.array_equal(model.predict()[:4], [0, 1, 0, 1])
    assert model.get_params()["tol"] == 1e-9

    with pytest.raises(ValueError):
        LaplaceLearning().fit(graph, np.full(60, -1))
