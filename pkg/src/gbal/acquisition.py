"""Acquisition functions scoring candidate nodes for labeling.

Uncertainty (UC) works directly on prediction margins. VOpt, MC, and
MCVOpt need a covariance surrogate: a truncated spectral decomposition of
the graph Laplacian, C = V diag(1/(lambda_j + tau)) V^T, held in a
SpectralCache and queried through its low-rank factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .laplace import ConvergenceError, predict_labels
from .validation import check_indices

__all__ = [
    "AcquisitionVector",
    "SpectralCache",
    "uncertainty",
    "spectral_decompose",
    "vopt",
    "model_change",
    "mc_vopt",
    "ACQUISITION_FUNCTIONS",
]


@dataclass(frozen=True)
class AcquisitionVector:
    """Nonnegative scores over an explicit candidate id set."""

    ids: np.ndarray
    values: np.ndarray
    name: str = "acquisition"

    def __post_init__(self):
        ids = np.asarray(self.ids, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if ids.ndim != 1 or ids.shape != values.shape:
            raise ValueError("ids and values must be 1-d arrays of equal length")
        if values.size and values.min() < 0:
            raise ValueError("acquisition values must be nonnegative")
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "values", values)

    def to_full(self, n_nodes):
        """Extend to all nodes, zero outside the candidate set."""
        full = np.zeros(n_nodes)
        full[self.ids] = self.values
        return full


def _check_candidates(candidates, n_nodes, labeled=None):
    cand = check_indices(candidates, n_nodes, name="candidates",
                         allow_empty=True)
    if labeled is not None and cand.size:
        if np.intersect1d(cand, labeled).size:
            raise ValueError("candidates must be disjoint from labeled nodes")
    return cand


def uncertainty(pred, candidates):
    """Margin-based uncertainty: UC(k) = 1 - (s1(k) - s2(k)).

    s1 and s2 are the largest and second-largest score entries of row k.
    Values are clamped into [0, 1].
    """
    if pred.n_classes < 2:
        raise ValueError("uncertainty needs at least 2 classes")
    cand = _check_candidates(candidates, pred.n_nodes, labeled=pred.labeled)
    rows = pred.scores[cand]
    part = np.partition(rows, pred.n_classes - 2, axis=1)
    margin = part[:, -1] - part[:, -2]
    values = np.clip(1.0 - margin, 0.0, 1.0)
    return AcquisitionVector(ids=cand, values=values, name="uc")


@dataclass(frozen=True)
class SpectralCache:
    """Lowest-m Laplacian eigenpairs plus covariance parameters.

    Attributes
    ----------
    eigenvalues : ndarray of shape (m,)
        Ascending, clamped to be nonnegative.
    eigenvectors : ndarray of shape (n_nodes, m)
        Orthonormal columns.
    tau : float
        Spectral regularization added to every eigenvalue.
    gamma2 : float
        Noise parameter in the acquisition denominators.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    tau: float
    gamma2: float

    @property
    def m(self):
        return self.eigenvalues.shape[0]

    def covariance_columns(self, ids):
        """Return (‖C e_k‖², C_kk) for each requested node k.

        Both quantities come from the low-rank factors:
        ‖C e_k‖² = Σ_j V_kj² / (λ_j + τ)² and C_kk = Σ_j V_kj² / (λ_j + τ).
        """
        Vk = self.eigenvectors[ids]
        inv = 1.0 / (self.eigenvalues + self.tau)
        sq = Vk * Vk
        return sq @ (inv * inv), sq @ inv


def spectral_decompose(graph, m=None, tau=0.1, gamma2=0.01, seed=0):
    """Lowest-m eigenpairs of the graph Laplacian L = D - W.

    Uses a dense symmetric solve when m equals the node count and a
    shift-inverted iterative solve otherwise, with a seeded start vector
    for determinism.

    Parameters
    ----------
    graph : SimilarityGraph
    m : int, optional
        Number of eigenpairs, default min(n_nodes, 50).
    tau, gamma2 : float
        Positive covariance parameters stored on the cache.

    Raises
    ------
    ConvergenceError
        When the iterative eigensolver fails to converge.
    """
    n = graph.n_nodes
    if m is None:
        m = min(n, 50)
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, {n}], got {m}")
    if tau <= 0 or gamma2 <= 0:
        raise ValueError("tau and gamma2 must be positive")
    L = sparse.diags(graph.degrees()) - graph.weights
    if m == n:
        vals, vecs = np.linalg.eigh(L.toarray())
        vals, vecs = vals[:m], vecs[:, :m]
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(n)
        try:
            # shift-invert just below zero targets the smallest eigenvalues
            vals, vecs = eigsh(L.tocsc(), k=m, sigma=-0.01, which="LM", v0=v0)
        except ArpackNoConvergence as exc:
            raise ConvergenceError(
                f"eigensolver did not converge for m={m}") from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    if vals.min() < -1e-10:
        raise ConvergenceError(
            f"Laplacian eigenvalue {vals.min():.3e} below tolerance")
    vals = np.maximum(vals, 0.0)
    return SpectralCache(eigenvalues=vals, eigenvectors=vecs,
                         tau=tau, gamma2=gamma2)


def vopt(cache, candidates):
    """Variance reduction: VOpt(k) = ‖C e_k‖² / (γ² + C_kk)."""
    n = cache.eigenvectors.shape[0]
    cand = _check_candidates(candidates, n)
    col_sq, diag = cache.covariance_columns(cand)
    return AcquisitionVector(ids=cand, values=col_sq / (cache.gamma2 + diag),
                             name="vopt")


def _change_norm(pred, cand):
    # distance between the current score row and the one-hot vector of its
    # own argmax
    rows = pred.scores[cand]
    yhat = predict_labels(pred)[cand]
    onehot = np.zeros_like(rows)
    onehot[np.arange(cand.size), yhat] = 1.0
    return np.linalg.norm(onehot - rows, axis=1)


def model_change(cache, pred, candidates):
    """MC(k) = (‖C e_k‖ / (γ² + C_kk)) · ‖ŷ(k) − u(x_k)‖₂."""
    cand = _check_candidates(candidates, pred.n_nodes, labeled=pred.labeled)
    col_sq, diag = cache.covariance_columns(cand)
    values = (np.sqrt(col_sq) / (cache.gamma2 + diag)) * _change_norm(pred, cand)
    return AcquisitionVector(ids=cand, values=values, name="mc")


def mc_vopt(cache, pred, candidates):
    """MCVOpt(k) = (‖C e_k‖² / (γ² + C_kk)) · ‖ŷ(k) − u(x_k)‖₂."""
    cand = _check_candidates(candidates, pred.n_nodes, labeled=pred.labeled)
    col_sq, diag = cache.covariance_columns(cand)
    values = (col_sq / (cache.gamma2 + diag)) * _change_norm(pred, cand)
    return AcquisitionVector(ids=cand, values=values, name="mcvopt")


ACQUISITION_FUNCTIONS = ("uc", "vopt", "mc", "mcvopt")
