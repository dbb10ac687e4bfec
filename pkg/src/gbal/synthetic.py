"""Synthetic benchmark datasets with ground-truth labels."""

from __future__ import annotations

import numpy as np
from sklearn.datasets import make_blobs, make_moons

__all__ = ["make_checkerboard", "make_synthetic", "SYNTHETIC_KINDS"]


def make_checkerboard(n, seed=0):
    """Uniform unit-square samples labeled by 4x4 cell parity.

    Class of (x, y) is (floor(4x) + floor(4y)) mod 2, giving the familiar
    two-class checkerboard. Requires n >= 16 so every cell is plausibly
    populated.
    """
    if n < 16:
        raise ValueError("checkerboard needs at least 16 points")
    rng = np.random.default_rng(seed)
    X = rng.uniform(0.0, 1.0, size=(n, 2))
    cells = np.floor(4.0 * X).astype(np.int64)
    y = (cells[:, 0] + cells[:, 1]) % 2
    return X, y


def make_synthetic(kind, n, seed=0):
    """Generate (features, labels) for a named dataset.

    Parameters
    ----------
    kind : {"checkerboard", "two-moons", "gaussian-blobs"}
    n : int
    seed : int
        Fully determines the output.
    """
    if kind == "checkerboard":
        return make_checkerboard(n, seed=seed)
    if kind == "two-moons":
        X, y = make_moons(n_samples=n, noise=0.08, random_state=seed)
        return X.astype(np.float64), y.astype(np.int64)
    if kind == "gaussian-blobs":
        X, y = make_blobs(n_samples=n, centers=4, cluster_std=0.6,
                          center_box=(-8.0, 8.0), random_state=seed)
        return X.astype(np.float64), y.astype(np.int64)
    raise ValueError(f"unknown dataset kind {kind!r}")


SYNTHETIC_KINDS = ("checkerboard", "two-moons", "gaussian-blobs")
