"""Similarity-graph construction against the dense reference build."""

import numpy as np
import pytest

from gbal.graph import (KnnGraphBuilder, angular_distance, build_graph,
                        build_similarity_graph, connected_components,
                        knn_search, pairwise_distances, resolve_k)

from oracles import brute_force_graph, graph_from_dense


def test_angular_distance_examples():
    assert angular_distance((3, 4), (3, 4)) == pytest.approx(0.0, abs=1e-15)
    assert angular_distance((1, 0), (0, 1)) == pytest.approx(np.pi / 2)
    assert angular_distance((1, 0), (1, 1)) == pytest.approx(np.pi / 4)


def test_angular_distance_symmetry_and_scale_invariance():
    rng = np.random.default_rng(0)
    for _ in range(50):
        x, y = rng.normal(size=(2, 6))
        a, b = rng.uniform(0.1, 10.0, size=2)
        assert angular_distance(x, y) == pytest.approx(angular_distance(y, x))
        assert angular_distance(a * x, b * y) == pytest.approx(
            angular_distance(x, y), abs=1e-8)
        assert 0.0 <= angular_distance(x, y) <= np.pi


def test_angular_distance_rejects_bad_input():
    with pytest.raises(ValueError):
        angular_distance((0.0, 0.0), (1.0, 0.0))
    with pytest.raises(ValueError):
        angular_distance((1.0, 0.0), (1.0, 0.0, 0.0))


def test_pairwise_rejects_zero_rows_for_angular():
    X = np.array([[1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        pairwise_distances(X, metric="angular")
    # fine under euclidean
    pairwise_distances(X, metric="euclidean")


def test_knn_search_picks_closest_direction():
    X = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [1.0, 0.1]])
    index = knn_search(X, k=1, method="brute")
    assert index.indices[0, 0] == 3


def test_knn_search_k1_matches_min_distance():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(40, 5))
    index = knn_search(X, k=1, method="brute")
    D = pairwise_distances(X)
    np.fill_diagonal(D, np.inf)
    assert np.allclose(index.distances[:, 0], D.min(axis=1))


def test_knn_search_two_points():
    X = np.array([[1.0, 0.0], [0.9, 0.3]])
    index = knn_search(X, k=1)
    assert index.indices[0, 0] == 1 and index.indices[1, 0] == 0


def test_knn_search_rejects_k_too_large():
    X = np.random.default_rng(0).normal(size=(5, 3))
    with pytest.raises(ValueError):
        knn_search(X, k=5)


def test_knn_index_invariants():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(60, 4))
    for method in ("brute", "tree"):
        index = knn_search(X, k=7, method=method)
        assert np.all(np.diff(index.distances, axis=1) >= 0)
        assert np.all(index.distances >= 0)
        assert np.all(index.distances <= np.pi)
        assert not np.any(index.indices == np.arange(60)[:, None])


def test_tree_matches_brute():
    rng = np.random.default_rng(3)
    for metric in ("angular", "euclidean"):
        X = rng.normal(size=(120, 6))
        brute = knn_search(X, k=9, metric=metric, method="brute")
        tree = knn_search(X, k=9, metric=metric, method="tree")
        assert np.array_equal(brute.indices, tree.indices)
        assert np.allclose(brute.distances, tree.distances, atol=1e-9)


def test_resolve_k_defaults():
    assert resolve_k(1000) == 50
    assert resolve_k(51) == 50
    assert resolve_k(50) == 5
    assert resolve_k(30) == 3
    assert resolve_k(16) == 2
    assert resolve_k(2) == 1
    with pytest.raises(ValueError):
        resolve_k(1)
    with pytest.raises(ValueError):
        resolve_k(10, 0)


def test_duplicate_points_keep_unit_kernel_edge():
    # two identical points among scattered ones: distance 0 edge, kernel 1
    rng = np.random.default_rng(4)
    X = rng.normal(size=(10, 3))
    X[7] = X[2]
    graph = build_similarity_graph(X, k=3, method="brute",
                                   warn_disconnected=False)
    w = graph.weights[2, 7]
    assert w == pytest.approx(1.0)
    # the zero-length edge is stored explicitly
    row = graph.lengths.getrow(2)
    j = list(row.indices).index(7)
    assert row.data[j] == 0.0


def test_one_sided_listing_halves_weight():
    # craft an index where 0 lists 1 but 1 does not list 0
    from gbal.graph import KnnIndex

    indices = np.array([[1, 2], [2, 3], [1, 3], [1, 2]])
    distances = np.array([[0.3, 0.5], [0.2, 0.4], [0.2, 0.3], [0.4, 0.5]])
    index = KnnIndex(k=2, indices=indices, distances=distances,
                     metric="angular")
    graph = build_graph(index, warn_disconnected=False)
    wbar_01 = np.exp(-0.3 ** 2 / (np.sqrt(0.5) * np.sqrt(0.4)))
    assert graph.weights[0, 1] == pytest.approx(wbar_01 / 2.0)
    assert graph.weights[1, 0] == pytest.approx(wbar_01 / 2.0)


def test_graph_matches_dense_reference():
    rng = np.random.default_rng(5)
    for trial in range(25):
        n = int(rng.integers(20, 120))
        d = int(rng.integers(2, 12))
        k = int(rng.integers(2, min(8, n - 1)))
        metric = "angular" if trial % 2 == 0 else "euclidean"
        X = rng.normal(size=(n, d))
        graph = build_similarity_graph(X, k=k, metric=metric, method="brute",
                                       warn_disconnected=False)
        W_ref, E_ref, mask = brute_force_graph(X, k, metric=metric)
        W = graph.weights.toarray()
        assert np.allclose(W, W_ref, rtol=1e-12, atol=0)
        # identical sparsity and edge lengths
        assert np.array_equal(W != 0, mask)
        E = np.zeros_like(W)
        ln = graph.lengths
        for i in range(n):
            E[i, ln.indices[ln.indptr[i]:ln.indptr[i + 1]]] = 1.0
            E[i, ln.indices[ln.indptr[i]:ln.indptr[i + 1]]] = \
                ln.data[ln.indptr[i]:ln.indptr[i + 1]]
        assert np.allclose(np.where(mask, E, 0.0), E_ref, rtol=1e-12, atol=0)


def test_graph_structural_invariants():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(150, 8))
    graph = build_similarity_graph(X, k=10, method="brute",
                                   warn_disconnected=False)
    W = graph.weights
    assert (W != W.T).nnz == 0  # exact symmetry, same stored values
    assert W.diagonal().max() == 0.0
    assert np.all(W.data > 0) and np.all(W.data <= 1.0)
    # weights and lengths share one sparsity pattern
    assert np.array_equal(W.indptr, graph.lengths.indptr)
    assert np.array_equal(W.indices, graph.lengths.indices)


def test_sigma_floor_handles_mass_duplicates():
    X = np.ones((8, 3))
    X[6] = (0.0, 1.0, 0.0)
    graph = build_similarity_graph(X, k=3, method="brute",
                                   warn_disconnected=False)
    assert np.all(np.isfinite(graph.weights.data))


def test_connected_components_examples():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(10, 3)) * 0.01 + 100.0
    b = rng.normal(size=(10, 3)) * 0.01 - 100.0
    graph = build_similarity_graph(np.vstack([a, b]), k=3,
                                   metric="euclidean", method="brute",
                                   warn_disconnected=False)
    n_comp, labels = connected_components(graph)
    assert n_comp == 2
    assert len(set(labels[:10])) == 1 and len(set(labels[10:])) == 1

    complete = graph_from_dense(np.ones((5, 5)) - np.eye(5))
    assert connected_components(complete)[0] == 1

    single = graph_from_dense(np.zeros((1, 1)))
    assert connected_components(single)[0] == 1


def test_disconnected_graph_warns():
    rng = np.random.default_rng(8)
    a = rng.normal(size=(10, 3)) * 0.01 + 100.0
    b = rng.normal(size=(10, 3)) * 0.01 - 100.0
    with pytest.warns(UserWarning, match="disconnected"):
        build_similarity_graph(np.vstack([a, b]), k=3, metric="euclidean",
                               method="brute")


def test_builder_estimator_api():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(80, 4))
    builder = KnnGraphBuilder(n_neighbors=6, metric="euclidean",
                              method="brute")
    params = builder.get_params()
    assert params["n_neighbors"] == 6
    builder.set_params(n_neighbors=5)
    graph = builder.fit_transform(X)
    assert graph.k == 5
    assert builder.n_components_ >= 1
    assert builder.graph_ is graph
