"""Sparse symmetric KNN similarity graphs over embedded feature vectors.

The graph is built in three steps: a K-nearest-neighbor search under an
angular (or Euclidean) metric, a Gaussian kernel with per-node scales taken
from the K-th neighbor distance, and symmetrization of the resulting sparse
weight matrix. Per-edge metric distances are retained alongside the weights
so that shortest-path routines can run on the same structure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from sklearn.base import BaseEstimator
from sklearn.neighbors import BallTree

from .validation import check_features

__all__ = [
    "KnnIndex",
    "SimilarityGraph",
    "angular_distance",
    "pairwise_distances",
    "resolve_k",
    "knn_search",
    "build_graph",
    "build_similarity_graph",
    "connected_components",
    "KnnGraphBuilder",
]

METRICS = ("angular", "euclidean")


def angular_distance(x, y):
    """Angle in radians between two nonzero vectors.

    Computed as the arccosine of their cosine similarity, clamped into
    [-1, 1] to guard against floating-point overflow. The result lies in
    [0, pi] and is invariant under positive rescaling of either argument.

    Parameters
    ----------
    x, y : array-like of shape (d,)
        Input vectors. Both must have strictly positive Euclidean norm.

    Returns
    -------
    float
        Angular distance in radians.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(
            f"expected two vectors of equal dimension, got {x.shape} and {y.shape}")
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise ValueError("angular distance is undefined for zero vectors")
    cos = np.dot(x, y) / (nx * ny)
    return float(np.arccos(np.clip(cos, -1.0, 1.0)))


def pairwise_distances(X, Y=None, metric="angular"):
    """Dense pairwise distance matrix between rows of X and Y.

    Parameters
    ----------
    X : ndarray of shape (n, d)
    Y : ndarray of shape (m, d), optional
        Defaults to X.
    metric : {"angular", "euclidean"}

    Returns
    -------
    ndarray of shape (n, m)
    """
    X = np.asarray(X, dtype=np.float64)
    Y = X if Y is None else np.asarray(Y, dtype=np.float64)
    if metric == "angular":
        nx = np.linalg.norm(X, axis=1)
        ny = np.linalg.norm(Y, axis=1)
        if np.any(nx == 0.0) or np.any(ny == 0.0):
            raise ValueError("angular distance is undefined for zero vectors")
        cos = (X @ Y.T) / np.outer(nx, ny)
        return np.arccos(np.clip(cos, -1.0, 1.0))
    if metric == "euclidean":
        sq = (np.sum(X * X, axis=1)[:, None] + np.sum(Y * Y, axis=1)[None, :]
              - 2.0 * (X @ Y.T))
        return np.sqrt(np.maximum(sq, 0.0))
    raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


@dataclass(frozen=True)
class KnnIndex:
    """K-nearest-neighbor lists for every node.

    Attributes
    ----------
    k : int
        Number of neighbors per node.
    indices : ndarray of shape (n, k)
        Neighbor ids, ordered by ascending distance. A node never lists
        itself.
    distances : ndarray of shape (n, k)
        Metric distances aligned with ``indices``, ascending per row.
    metric : str
        Distance metric the index was built under.
    """

    k: int
    indices: np.ndarray
    distances: np.ndarray
    metric: str

    @property
    def n_points(self):
        return self.indices.shape[0]


@dataclass(frozen=True)
class SimilarityGraph:
    """Symmetric weighted KNN graph with per-edge metric lengths.

    ``weights`` and ``lengths`` are CSR matrices over an identical sparsity
    pattern: weights hold the symmetrized Gaussian kernel values in (0, 1],
    lengths hold the metric distances of the same edges (zero-length edges
    between duplicate points are stored explicitly). The diagonal is empty.
    """

    weights: sparse.csr_matrix
    lengths: sparse.csr_matrix
    k: int
    metric: str

    @property
    def n_nodes(self):
        return self.weights.shape[0]

    def neighbors(self, i):
        """Ids adjacent to node ``i`` in the symmetrized graph."""
        w = self.weights
        return w.indices[w.indptr[i]:w.indptr[i + 1]]

    def degrees(self):
        """Weighted degree vector d_i = sum_j W_ij."""
        return np.asarray(self.weights.sum(axis=1)).ravel()


def resolve_k(n_points, k=None):
    """Default neighbor count: 50, shrunk for small datasets.

    When ``k`` is None the default is 50 for n > 50 and max(2, n // 10)
    otherwise, clamped to n - 1 so the search stays valid.
    """
    if n_points < 2:
        raise ValueError("need at least 2 points to build a KNN graph")
    if k is None:
        k = 50 if n_points > 50 else max(2, n_points // 10)
        return min(k, n_points - 1)
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k >= n_points:
        raise ValueError(f"k={k} must be smaller than n_points={n_points}")
    return k


def _stabilize_rows(dist, ind):
    # re-sort each row by (distance, id) so ties are deterministic
    order = np.lexsort((ind, dist), axis=1)
    rows = np.arange(dist.shape[0])[:, None]
    return dist[rows, order], ind[rows, order]


def _knn_brute(X, k, metric):
    D = pairwise_distances(X, metric=metric)
    np.fill_diagonal(D, np.inf)
    n = X.shape[0]
    ids = np.broadcast_to(np.arange(n), (n, n))
    order = np.lexsort((ids, D), axis=1)[:, :k]
    rows = np.arange(n)[:, None]
    return KnnIndex(k=k, indices=order.astype(np.int64),
                    distances=D[rows, order], metric=metric)


def _knn_tree(X, k, metric):
    n = X.shape[0]
    if metric == "angular":
        norms = np.linalg.norm(X, axis=1)
        if np.any(norms == 0.0):
            raise ValueError("angular distance is undefined for zero vectors")
        # chord length on the unit sphere increases monotonically with the
        # angle, so a Euclidean tree over normalized rows is exact
        Q = X / norms[:, None]
    else:
        Q = X
    tree = BallTree(Q)
    dist, ind = tree.query(Q, k=k + 1)
    keep_d = np.empty((n, k))
    keep_i = np.empty((n, k), dtype=np.int64)
    for i in range(n):
        row = ind[i]
        hit = np.nonzero(row == i)[0]
        # under heavy ties the query may omit the point itself; drop the
        # farthest entry instead
        j = hit[0] if hit.size else k
        keep_d[i] = np.delete(dist[i], j)
        keep_i[i] = np.delete(row, j)
    if metric == "angular":
        keep_d = 2.0 * np.arcsin(np.clip(keep_d / 2.0, 0.0, 1.0))
    keep_d, keep_i = _stabilize_rows(keep_d, keep_i)
    return KnnIndex(k=k, indices=keep_i, distances=keep_d, metric=metric)


def knn_search(X, k=None, metric="angular", method="auto"):
    """Find the k nearest neighbors of every row of X.

    Parameters
    ----------
    X : array-like of shape (n, d)
    k : int, optional
        Neighbors per node; see :func:`resolve_k` for the default.
    metric : {"angular", "euclidean"}
    method : {"auto", "tree", "brute"}
        "brute" computes the exact dense distance matrix and is intended
        for tests and small inputs; "tree" uses a ball tree (also exact,
        up to tie ordering). "auto" picks "brute" below 600 points.

    Returns
    -------
    KnnIndex
    """
    X = check_features(X)
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    k = resolve_k(X.shape[0], k)
    if method == "auto":
        method = "brute" if X.shape[0] <= 600 else "tree"
    if method == "brute":
        return _knn_brute(X, k, metric)
    if method == "tree":
        return _knn_tree(X, k, metric)
    raise ValueError(f"unknown method {method!r}")


def build_graph(index, sigma_floor=1e-8, warn_disconnected=True):
    """Assemble the symmetric similarity graph from a KNN index.

    Per-node scales are sigma_i = sqrt(d(x_i, x_iK)) with the K-th neighbor
    distance under the index metric; raw weights exp(-d_ij^2 / (sigma_i
    sigma_j)) on the KNN mask are symmetrized as W = (Wbar + Wbar^T) / 2.

    Parameters
    ----------
    index : KnnIndex
        Must have k >= 2.
    sigma_floor : float
        Substitute scale when the K-th neighbor distance is exactly zero
        (at least K duplicate points).
    warn_disconnected : bool
        Emit a warning with the component count when the graph is not
        connected.

    Returns
    -------
    SimilarityGraph
    """
    if index.k < 2:
        raise ValueError("graph construction needs k >= 2")
    n = index.n_points
    dist = index.distances
    nbr = index.indices

    sigma = np.sqrt(dist[:, -1])
    sigma = np.where(dist[:, -1] > 0.0, sigma, sigma_floor)
    denom = sigma[:, None] * sigma[nbr]
    kernel = np.exp(-(dist * dist) / denom)

    rows = np.repeat(np.arange(n), index.k)
    cols = nbr.ravel()
    kdata = kernel.ravel()
    ldata = dist.ravel()
    keep = kdata > 0.0  # drop underflowed far edges
    rows, cols, kdata, ldata = rows[keep], cols[keep], kdata[keep], ldata[keep]

    wbar = sparse.csr_matrix((kdata, (rows, cols)), shape=(n, n))
    weights = (wbar + wbar.T) * 0.5
    weights.sort_indices()

    # shift lengths by +1 before the max-symmetrization so genuine
    # zero-length edges (duplicate points) survive sparse storage
    lshift = sparse.csr_matrix((ldata + 1.0, (rows, cols)), shape=(n, n))
    lsym = lshift.maximum(lshift.T)
    lsym.sort_indices()
    lengths = sparse.csr_matrix(
        (lsym.data - 1.0, lsym.indices, lsym.indptr), shape=(n, n))

    graph = SimilarityGraph(weights=weights, lengths=lengths,
                            k=index.k, metric=index.metric)
    if warn_disconnected:
        n_comp, _ = connected_components(graph)
        if n_comp > 1:
            warnings.warn(
                f"similarity graph is disconnected ({n_comp} components); "
                "label propagation treats components independently",
                UserWarning, stacklevel=2)
    return graph


def build_similarity_graph(X, k=None, metric="angular", method="auto",
                           sigma_floor=1e-8, warn_disconnected=True):
    """Convenience wrapper: KNN search followed by graph assembly."""
    index = knn_search(X, k=k, metric=metric, method=method)
    return build_graph(index, sigma_floor=sigma_floor,
                       warn_disconnected=warn_disconnected)


def connected_components(graph):
    """Component count and per-node component labels of the graph."""
    return csgraph.connected_components(graph.weights, directed=False)


class KnnGraphBuilder(BaseEstimator):
    """Estimator-style wrapper around similarity-graph construction.

    Parameters
    ----------
    n_neighbors : int or None
        Neighbors per node (None resolves the dataset-size default).
    metric : {"angular", "euclidean"}
    method : {"auto", "tree", "brute"}
    sigma_floor : float
        Scale substitute for nodes whose K-th neighbor distance is zero.

    Attributes
    ----------
    index_ : KnnIndex
    graph_ : SimilarityGraph
    n_components_ : int
    """

    def __init__(self, n_neighbors=None, metric="angular", method="auto",
                 sigma_floor=1e-8):
        self.n_neighbors = n_neighbors
        self.metric = metric
        self.method = method
        self.sigma_floor = sigma_floor

    def fit(self, X, y=None):
        X = check_features(X)
        self.index_ = knn_search(X, k=self.n_neighbors, metric=self.metric,
                                 method=self.method)
        self.graph_ = build_graph(self.index_, sigma_floor=self.sigma_floor)
        self.n_components_, self.component_labels_ = connected_components(
            self.graph_)
        return self

    def fit_transform(self, X, y=None):
        """Fit and return the constructed :class:`SimilarityGraph`."""
        return self.fit(X).graph_
