"""Annulus core-set construction over graph shortest-path distance.

Selection walks the graph with two radii: everything closer than r to a
chosen point becomes permanently ineligible (the seen set S), while the
annulus between r and R feeds the next random pick (the candidate set C).
When the annulus empties, selection jumps uniformly to an unseen node.
Radii are either fixed or derived per point from a local density estimate
(R encloses a fraction p of the data, r = R/2). The loop ends when S
covers every node, which takes at most N selections.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .validation import check_indices, check_random_state

__all__ = [
    "DacParams",
    "DacStep",
    "dijkstra_ball",
    "dijkstra_distances",
    "density_radius",
    "dac",
]


@dataclass(frozen=True)
class DacParams:
    """Radius policy and seed for annulus core-set selection.

    mode "fixed" uses the given inner/outer radii (graph-distance units);
    mode "density" derives, for each selected point, the outer radius R
    enclosing a fraction ``p`` of the data and sets r = R/2.
    """

    mode: str = "density"
    p: float = 0.05
    r: float | None = None
    R: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.mode == "fixed":
            if self.r is None or self.R is None:
                raise ValueError("fixed mode requires both r and R")
            if not 0 < self.r <= self.R:
                raise ValueError("fixed mode requires 0 < r <= R")
        elif self.mode == "density":
            if not 0.0 < self.p < 1.0:
                raise ValueError("density mode requires 0 < p < 1")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class DacStep:
    """One selection: the chosen node, radii in force, set sizes after the
    update, and whether the pick was a random jump off an empty annulus."""

    node: int
    r: float
    R: float
    n_seen: int
    n_annulus: int
    random_jump: bool
    initial: bool = False


def _ball_scan(graph, source, radius, count_target=None):
    """Dijkstra from ``source`` over stored edge lengths.

    Settles nodes in distance order until either the frontier reaches
    ``radius`` (balls are strict: kept nodes have distance < radius) or
    ``count_target`` nodes are settled. Returns (settled ids, distances)
    in settle order.
    """
    lengths = graph.lengths
    indptr, indices, data = lengths.indptr, lengths.indices, lengths.data
    dist = {source: 0.0}
    done = set()
    order, order_d = [], []
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        if radius is not None and d >= radius:
            break
        done.add(u)
        order.append(u)
        order_d.append(d)
        if count_target is not None and len(done) >= count_target:
            break
        for pos in range(indptr[u], indptr[u + 1]):
            v = indices[pos]
            nd = d + data[pos]
            if v not in done and nd < dist.get(v, np.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return order, order_d


def dijkstra_ball(graph, source, radius):
    """Ids of all nodes with shortest-path distance < ``radius`` from
    ``source``, ascending. Radius 0 returns an empty set."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    check_indices([source], graph.n_nodes, name="source")
    if radius == 0.0:
        return np.empty(0, dtype=np.int64)
    order, _ = _ball_scan(graph, source, radius)
    return np.sort(np.asarray(order, dtype=np.int64))


def dijkstra_distances(graph, source):
    """Shortest-path distance from ``source`` to every node (inf when
    unreachable)."""
    order, order_d = _ball_scan(graph, source, None)
    out = np.full(graph.n_nodes, np.inf)
    out[order] = order_d
    return out


def density_radius(graph, source, p):
    """Smallest R with at least ceil(p * N) nodes within distance <= R.

    Runs Dijkstra until that many nodes are settled and returns the last
    settle distance. If the source's component is smaller than the target
    count, returns the component eccentricity bumped by one ulp so the
    whole component falls strictly inside.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    check_indices([source], graph.n_nodes, name="source")
    target = int(np.ceil(p * graph.n_nodes))
    order, order_d = _ball_scan(graph, source, None, count_target=target)
    if len(order) >= target:
        return float(order_d[-1])
    return float(np.nextafter(order_d[-1], np.inf))


def dac(graph, initial=None, params=None, return_trace=False):
    """Annulus core-set selection (ordered).

    Parameters
    ----------
    graph : SimilarityGraph
    initial : array-like of node ids, optional
        Pre-labeled points. They seed the seen set and annulus exactly as
        selected points do and are returned first, but are not re-selected.
    params : DacParams
    return_trace : bool
        Also return the per-selection :class:`DacStep` list.

    Returns
    -------
    core : ndarray
        Ordered selection, initial ids first. Every node ends up within
        distance < r of some core point (or is itself a core point), and
        any two non-initial selections y_i, y_j (i < j) satisfy
        d_G(y_i, y_j) >= r_i.
    trace : list of DacStep, only when ``return_trace`` is set
    """
    if params is None:
        params = DacParams()
    n = graph.n_nodes
    rng = check_random_state(params.seed)
    initial = (np.empty(0, dtype=np.int64) if initial is None
               else check_indices(initial, n, name="initial", allow_empty=True))

    seen = np.zeros(n, dtype=bool)
    annulus = np.zeros(n, dtype=bool)
    core = list(initial)
    trace = []

    def absorb(x, is_initial, jumped):
        if params.mode == "density":
            R = density_radius(graph, x, params.p)
            r = R / 2.0
        else:
            r, R = params.r, params.R
        inner = dijkstra_ball(graph, x, r)
        outer = dijkstra_ball(graph, x, R)
        seen[inner] = True
        seen[x] = True  # r may be 0; the point itself is always spent
        annulus[outer] = True
        annulus[seen] = False
        if return_trace:
            trace.append(DacStep(
                node=int(x), r=float(r), R=float(R),
                n_seen=int(seen.sum()), n_annulus=int(annulus.sum()),
                random_jump=jumped, initial=is_initial))

    for x in initial:
        absorb(x, True, False)

    while not seen.all():
        pool = np.nonzero(annulus)[0]
        jumped = pool.size == 0
        if jumped:
            pool = np.nonzero(~seen)[0]
        x = int(rng.choice(pool))
        core.append(x)
        absorb(x, False, jumped)

    core = np.asarray(core, dtype=np.int64)
    if return_trace:
        return core, trace
    return core
