"""Query-set selectors: LocalMax batch sampling and its baselines.

LocalMax walks candidates in descending acquisition order and keeps a
node only when its value is at least that of every graph neighbor,
removing the whole neighborhood from further consideration after each
examination. The baselines (sequential argmax, top-B, uniform random,
acquisition-proportional sampling) share the QuerySet output type.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .validation import check_indices, check_random_state

__all__ = [
    "QuerySet",
    "LocalMaxStats",
    "local_max_batch",
    "sequential_select",
    "top_max_batch",
    "random_batch",
    "acq_sample_batch",
    "SELECTORS",
]


@dataclass(frozen=True)
class QuerySet:
    """Ordered node ids chosen in one selection step."""

    ids: np.ndarray
    method: str
    iteration: int = 0

    def __post_init__(self):
        ids = np.asarray(self.ids, dtype=np.int64)
        if ids.ndim != 1:
            raise ValueError("query ids must be 1-d")
        if np.unique(ids).size != ids.size:
            raise ValueError("query ids must be unique")
        object.__setattr__(self, "ids", ids)

    def __len__(self):
        return self.ids.size

    def to_json_dict(self):
        return {"iteration": int(self.iteration), "method": self.method,
                "ids": [int(i) for i in self.ids]}


@dataclass(frozen=True)
class LocalMaxStats:
    """Instrumentation for the complexity contract: how many adjacency
    entries the walk read, and how many maxima it examined."""

    adjacency_touches: int
    n_examined: int


def _descending_order(ids, values):
    # by value descending, then id ascending
    return np.lexsort((ids, -values))


def local_max_batch(graph, acq, labeled, B, iteration=0, return_stats=False):
    """Select up to B local maxima of the acquisition function.

    The acquisition is extended with zeros on labeled nodes; every other
    node is eligible. Repeatedly the highest-valued eligible node k is
    examined: it joins the query set iff its value is >= the original
    value of each graph neighbor (labeled neighbors count as 0), and
    N(k) plus k itself leave the eligible pool either way. Stops when the
    pool empties or B nodes are accepted.

    Parameters
    ----------
    graph : SimilarityGraph
    acq : AcquisitionVector
    labeled : array-like of node ids
    B : int
    iteration : int
        Tag recorded on the returned QuerySet.
    return_stats : bool
        Also return :class:`LocalMaxStats`.

    Returns
    -------
    QuerySet, optionally (QuerySet, LocalMaxStats)
    """
    if B < 1:
        raise ValueError("B must be at least 1")
    n = graph.n_nodes
    labeled = check_indices(labeled, n, name="labeled", allow_empty=True)
    full = acq.to_full(n)
    full[labeled] = 0.0

    active = np.ones(n, dtype=bool)
    active[labeled] = False
    order = _descending_order(np.arange(n), full)

    chosen = []
    touches = 0
    examined = 0
    for k in order:
        if len(chosen) >= B:
            break
        if not active[k]:
            continue
        examined += 1
        nbrs = graph.neighbors(k)
        touches += nbrs.size
        if nbrs.size == 0 or full[k] >= full[nbrs].max():
            chosen.append(k)
        active[nbrs] = False
        active[k] = False

    qs = QuerySet(ids=np.asarray(chosen, dtype=np.int64),
                  method="localmax", iteration=iteration)
    if return_stats:
        return qs, LocalMaxStats(adjacency_touches=int(touches),
                                 n_examined=int(examined))
    return qs


def sequential_select(acq, iteration=0):
    """Singleton argmax of the acquisition, smallest-id tie-break."""
    if acq.ids.size == 0:
        raise ValueError("sequential selection needs a nonempty candidate set")
    best = _descending_order(acq.ids, acq.values)[0]
    return QuerySet(ids=acq.ids[[best]], method="sequential",
                    iteration=iteration)


def top_max_batch(acq, B, iteration=0):
    """Top-B candidates by value, smallest-id tie-break."""
    if B < 1:
        raise ValueError("B must be at least 1")
    order = _descending_order(acq.ids, acq.values)[:B]
    return QuerySet(ids=acq.ids[order], method="topmax", iteration=iteration)


def random_batch(candidates, B, rng, iteration=0):
    """Uniform sample of min(B, |candidates|) ids without replacement."""
    if B < 1:
        raise ValueError("B must be at least 1")
    rng = check_random_state(rng)
    cand = np.sort(np.asarray(candidates, dtype=np.int64))
    take = min(B, cand.size)
    ids = rng.choice(cand, size=take, replace=False) if take else cand[:0]
    return QuerySet(ids=ids, method="random", iteration=iteration)


def acq_sample_batch(acq, B, rng, iteration=0):
    """Sample B candidates with probability proportional to value.

    Draws are without replacement, so each successive draw is
    proportional to the values still remaining. Zero-valued candidates
    are only used (uniformly) once every positive-valued candidate is
    taken. All-zero values degrade to a uniform batch with a warning.
    """
    if B < 1:
        raise ValueError("B must be at least 1")
    rng = check_random_state(rng)
    order = np.argsort(acq.ids)
    ids, values = acq.ids[order], acq.values[order]
    pos = values > 0.0
    if not np.any(pos):
        warnings.warn("all acquisition values are zero; sampling uniformly",
                      UserWarning, stacklevel=2)
        qs = random_batch(ids, B, rng, iteration=iteration)
        return QuerySet(ids=qs.ids, method="acqsample", iteration=iteration)
    take = min(B, ids.size)
    n_pos = int(pos.sum())
    head = rng.choice(ids[pos], size=min(take, n_pos), replace=False,
                      p=values[pos] / values[pos].sum())
    if take > n_pos:
        tail = rng.choice(ids[~pos], size=take - n_pos, replace=False)
        head = np.concatenate([head, tail])
    return QuerySet(ids=head, method="acqsample", iteration=iteration)


SELECTORS = ("localmax", "sequential", "topmax", "random", "acqsample")
