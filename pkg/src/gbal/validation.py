"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array


def check_features(X, *, name="X"):
    """Validate a feature matrix and return it as a C-contiguous float64 array.

    Rejects sparse input, non-finite entries, and anything that is not a
    2-d numeric array with at least one row and one column.
    """
    X = check_array(X, dtype=np.float64, order="C", ensure_min_samples=1,
                    ensure_min_features=1)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {X.shape}")
    return X


def check_labels(y, n_points, *, name="y"):
    """Validate an integer label vector of length ``n_points``.

    Labels must be nonnegative integers. Returns an int64 array.
    """
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {y.shape}")
    if y.shape[0] != n_points:
        raise ValueError(
            f"{name} has length {y.shape[0]}, expected {n_points}")
    if y.size and not np.issubdtype(y.dtype, np.integer):
        if not np.all(y == np.floor(y)):
            raise ValueError(f"{name} must contain integers")
    y = y.astype(np.int64)
    if y.size and y.min() < 0:
        raise ValueError(f"{name} must be nonnegative")
    return y


def check_indices(idx, n_points, *, name="indices", allow_empty=False,
                  unique=True):
    """Validate a vector of point ids against a graph of ``n_points`` nodes."""
    idx = np.atleast_1d(np.asarray(idx))
    if idx.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional")
    if idx.size == 0:
        if allow_empty:
            return idx.astype(np.int64)
        raise ValueError(f"{name} must not be empty")
    if not np.issubdtype(idx.dtype, np.integer):
        if not np.all(idx == np.floor(idx)):
            raise ValueError(f"{name} must contain integer ids")
    idx = idx.astype(np.int64)
    if idx.min() < 0 or idx.max() >= n_points:
        raise ValueError(
            f"{name} out of range [0, {n_points}): "
            f"min={idx.min()}, max={idx.max()}")
    if unique and np.unique(idx).size != idx.size:
        raise ValueError(f"{name} contains duplicate ids")
    return idx


def check_random_state(seed):
    """Return a ``numpy.random.Generator`` for ``seed``.

    Accepts None, an int, a seed sequence tuple, or an existing Generator.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
