"""Graph Laplace learning with hard label constraints.

Given a similarity graph and a handful of labeled nodes, the classifier
minimizes the Dirichlet energy (1/2)<U, LU> over score matrices U that
agree exactly with the one-hot ground truth on labeled rows, where
L = D - W is the unnormalized graph Laplacian. The solution is harmonic
at unlabeled nodes and is found column-block-wise by preconditioned
conjugate gradients on the unlabeled submatrix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator

from .graph import connected_components
from .validation import check_indices, check_labels

__all__ = [
    "ConvergenceError",
    "LabelState",
    "Prediction",
    "laplace_learning",
    "predict_labels",
    "accuracy",
    "LaplaceLearning",
]


class ConvergenceError(RuntimeError):
    """Iterative solver failed to reach tolerance within its budget."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class LabelState:
    """Known labels: class count, labeled node ids, and their classes."""

    n_classes: int
    ids: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if self.n_classes < 1:
            raise ValueError("n_classes must be positive")
        ids = np.asarray(self.ids, dtype=np.int64)
        y = np.asarray(self.y, dtype=np.int64)
        if ids.ndim != 1 or ids.shape != y.shape:
            raise ValueError("ids and y must be 1-d arrays of equal length")
        if np.unique(ids).size != ids.size:
            raise ValueError("labeled ids must be unique")
        if y.size and (y.min() < 0 or y.max() >= self.n_classes):
            raise ValueError("class ids out of range")
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "y", y)

    @property
    def n_labeled(self):
        return self.ids.size

    def one_hot(self):
        """(n_labeled, n_classes) ground-truth indicator matrix."""
        out = np.zeros((self.ids.size, self.n_classes))
        out[np.arange(self.ids.size), self.y] = 1.0
        return out


@dataclass(frozen=True)
class Prediction:
    """Class scores per node; labeled rows equal their one-hot targets."""

    scores: np.ndarray
    labeled: np.ndarray

    @property
    def n_nodes(self):
        return self.scores.shape[0]

    @property
    def n_classes(self):
        return self.scores.shape[1]


def _pcg_multi(A, B, M_inv, X0, tol, max_iter):
    """Jacobi-preconditioned CG for A X = B, run jointly over columns.

    Each column stops once its residual norm falls below tol times its
    initial residual norm and, additionally, below tol in the max norm so
    downstream harmonicity checks hold on an absolute scale. Returns the
    solution block; raises ConvergenceError when the budget runs out.
    """
    X = X0.copy()
    R = B - A @ X
    r0 = np.linalg.norm(R, axis=0)
    target = tol * r0
    active = (np.linalg.norm(R, axis=0) > target) | (
        np.abs(R).max(axis=0, initial=0.0) > tol)
    if not np.any(active):
        return X
    Z = M_inv[:, None] * R
    P = Z.copy()
    rz = np.einsum("ij,ij->j", R, Z)
    for _ in range(max_iter):
        AP = A @ P
        pAp = np.einsum("ij,ij->j", P, AP)
        alpha = np.where(active & (pAp > 0), rz / np.where(pAp > 0, pAp, 1.0), 0.0)
        X += alpha * P
        R -= alpha * AP
        rnorm = np.linalg.norm(R, axis=0)
        rmax = np.abs(R).max(axis=0, initial=0.0)
        active = (rnorm > target) | (rmax > tol)
        if not np.any(active):
            return X
        Z = M_inv[:, None] * R
        rz_new = np.einsum("ij,ij->j", R, Z)
        beta = np.where(rz > 0, rz_new / np.where(rz > 0, rz, 1.0), 0.0)
        P = Z + beta * P
        rz = rz_new
    worst = float(np.linalg.norm(R, axis=0).max())
    raise ConvergenceError(
        f"conjugate gradient did not converge in {max_iter} iterations "
        f"(worst residual norm {worst:.3e})", residual=worst)


def laplace_learning(graph, labels, tol=1e-8, max_iter=None, warm_start=None):
    """Solve the hard-constrained Laplace learning problem.

    Parameters
    ----------
    graph : SimilarityGraph
    labels : LabelState
        At least one labeled node.
    tol : float
        Relative CG tolerance on each column's initial residual.
    max_iter : int, optional
        CG iteration budget, default 10 * n_nodes.
    warm_start : ndarray of shape (n_nodes, n_classes), optional
        Previous score matrix used as the CG initial guess.

    Returns
    -------
    Prediction
        Scores with labeled rows equal to their one-hot targets. Unlabeled
        nodes living in components without any label get uniform scores
        1/n_classes and a warning.

    Raises
    ------
    ConvergenceError
        When CG exhausts ``max_iter``.
    """
    n = graph.n_nodes
    if labels.n_labeled == 0:
        raise ValueError("at least one labeled node is required")
    if tol <= 0:
        raise ValueError("tol must be positive")
    check_indices(labels.ids, n, name="labeled ids")
    if max_iter is None:
        max_iter = 10 * n
    nc = labels.n_classes

    scores = np.zeros((n, nc))
    scores[labels.ids] = labels.one_hot()
    is_labeled = np.zeros(n, dtype=bool)
    is_labeled[labels.ids] = True
    if np.all(is_labeled):
        return Prediction(scores=scores, labeled=labels.ids.copy())

    _, comp = connected_components(graph)
    labeled_comps = np.unique(comp[labels.ids])
    reachable = np.isin(comp, labeled_comps)
    orphan = ~reachable & ~is_labeled
    if np.any(orphan):
        scores[orphan] = 1.0 / nc
        warnings.warn(
            f"{int(orphan.sum())} unlabeled nodes lie in components with no "
            "labels; assigning uniform scores", UserWarning, stacklevel=2)

    solve = np.nonzero(~is_labeled & reachable)[0]
    if solve.size == 0:
        return Prediction(scores=scores, labeled=labels.ids.copy())

    W = graph.weights
    deg = graph.degrees()
    L = sparse.diags(deg) - W
    A = L[solve][:, solve].tocsr()
    B = W[solve][:, labels.ids] @ labels.one_hot()
    diag = deg[solve]
    M_inv = 1.0 / diag
    X0 = (warm_start[solve] if warm_start is not None
          else np.zeros((solve.size, nc)))
    scores[solve] = _pcg_multi(A, B, M_inv, X0, tol, max_iter)
    return Prediction(scores=scores, labeled=labels.ids.copy())


def predict_labels(pred):
    """Per-node argmax class, ties toward the smallest class index."""
    scores = pred.scores if isinstance(pred, Prediction) else np.asarray(pred)
    return np.argmax(scores, axis=1)


def accuracy(pred, truth):
    """Fraction of unlabeled nodes predicted correctly.

    ``truth`` must cover every node. When no node is unlabeled the score
    is defined as 1.0.
    """
    truth = check_labels(truth, pred.n_nodes, name="truth")
    mask = np.ones(pred.n_nodes, dtype=bool)
    mask[pred.labeled] = False
    if not np.any(mask):
        return 1.0
    return float(np.mean(predict_labels(pred)[mask] == truth[mask]))


class LaplaceLearning(BaseEstimator):
    """Estimator interface to Laplace learning on a fixed graph.

    Follows the semi-supervised convention that ``y`` has one entry per
    node with -1 marking unlabeled nodes.

    Parameters
    ----------
    tol : float
        Relative CG tolerance.
    max_iter : int or None
        CG budget, default 10 * n_nodes.
    n_classes : int or None
        Class count; inferred from ``y`` when None.
    warm_start : bool
        Reuse the previous fit's scores as the CG initial guess.

    Attributes
    ----------
    scores_ : ndarray of shape (n_nodes, n_classes)
    labels_ : ndarray of shape (n_nodes,)
        Argmax prediction per node.
    """

    def __init__(self, tol=1e-8, max_iter=None, n_classes=None,
                 warm_start=False):
        self.tol = tol
        self.max_iter = max_iter
        self.n_classes = n_classes
        self.warm_start = warm_start

    def fit(self, X, y):
        """Fit on a SimilarityGraph ``X`` and per-node labels ``y`` (-1 =
        unlabeled)."""
        y = np.asarray(y, dtype=np.int64)
        if y.ndim != 1 or y.shape[0] != X.n_nodes:
            raise ValueError("y must have one entry per graph node")
        ids = np.nonzero(y >= 0)[0]
        nc = self.n_classes
        if nc is None:
            if ids.size == 0:
                raise ValueError("cannot infer n_classes without labels")
            nc = int(y[ids].max()) + 1
        state = LabelState(n_classes=nc, ids=ids, y=y[ids])
        guess = None
        if self.warm_start:
            prev = getattr(self, "scores_", None)
            if prev is not None and prev.shape == (X.n_nodes, nc):
                guess = prev
        pred = laplace_learning(X, state, tol=self.tol,
                                max_iter=self.max_iter, warm_start=guess)
        self.prediction_ = pred
        self.scores_ = pred.scores
        self.labels_ = predict_labels(pred)
        return self

    def predict(self, X=None):
        return self.labels_

    def predict_proba(self, X=None):
        return self.scores_
