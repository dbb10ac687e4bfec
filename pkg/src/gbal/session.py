"""Active-learning loop orchestration, oracles, and session persistence.

A session owns one similarity graph and walks the loop: label the initial
core-set, fit Laplace learning, evaluate an acquisition function over the
unlabeled candidates, select a query set, obtain labels, repeat until the
budget is spent. Labels come either from a ground-truth array (instant,
used by experiments) or from a human answering through the HTTP service;
the session is a plain state machine either way, advancing whenever the
pending query set is fully labeled.

Wall-clock fit and selection times are recorded per iteration and exclude
oracle response time. Sessions serialize to versioned JSON snapshots
(including solver state) so interrupted human-labeling runs resume with a
bit-identical continuation.
"""

from __future__ import annotations

import hashlib
import json
import time
import warnings
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .acquisition import (ACQUISITION_FUNCTIONS, mc_vopt, model_change,
                          spectral_decompose, uncertainty, vopt)
from .coreset import DacParams, dac
from .graph import build_similarity_graph
from .laplace import LabelState, accuracy, laplace_learning
from .selection import (SELECTORS, QuerySet, acq_sample_batch,
                        local_max_batch, random_batch, sequential_select,
                        top_max_batch)
from .validation import check_features, check_indices, check_labels

__all__ = [
    "ExperimentConfig",
    "HistoryEntry",
    "GroundTruthOracle",
    "ActiveLearningSession",
    "run_experiment",
    "SNAPSHOT_VERSION",
]

SNAPSHOT_VERSION = 1


class StaleIterationError(RuntimeError):
    """Label submission targeted an iteration that is no longer pending."""


@dataclass(frozen=True)
class HistoryEntry:
    """One fit cycle: labels in use, accuracy on the unlabeled remainder
    (None without ground truth), and wall-clock fit/selection seconds."""

    iteration: int
    n_labeled: int
    accuracy: float | None
    fit_seconds: float
    select_seconds: float
    method: str

    def to_json_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a run, hashable for staleness checks.

    Parameters
    ----------
    batch_size : int
        Query-set size B for batch selectors; sequential always uses 1.
    acquisition : {"uc", "vopt", "mc", "mcvopt"}
    selector : {"localmax", "sequential", "topmax", "random", "acqsample"}
    budget : int or float
        Label budget; a float in (0, 1] means a fraction of N (ceiled).
    budget_mode : {"total", "additional"}
        "total" counts every label including the initial core-set;
        "additional" counts only labels acquired after it.
    dac : DacParams or None
        Core-set policy; None skips core-set construction and relies on
        ``initial_labeled`` alone.
    initial_labeled : tuple of int
        Pre-labeled ids seeded into the core-set.
    k, metric, knn_method : graph-construction parameters.
    tol : float
        Laplace solver tolerance.
    m_eigen, tau, gamma2 : spectral-surrogate parameters for vopt/mc/mcvopt.
    n_classes : int or None
        Required when no ground truth is supplied (human labeling).
    class_names : tuple of str or None
    seed : int
        Seeds the per-iteration selector streams.
    """

    batch_size: int = 15
    acquisition: str = "uc"
    selector: str = "localmax"
    budget: float = 0.15
    budget_mode: str = "total"
    dac: DacParams | None = field(default_factory=DacParams)
    initial_labeled: tuple = ()
    k: int | None = None
    metric: str = "angular"
    knn_method: str = "auto"
    tol: float = 1e-8
    m_eigen: int | None = None
    tau: float = 0.1
    gamma2: float = 0.01
    n_classes: int | None = None
    class_names: tuple | None = None
    seed: int = 0

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.acquisition not in ACQUISITION_FUNCTIONS:
            raise ValueError(f"unknown acquisition {self.acquisition!r}")
        if self.selector not in SELECTORS:
            raise ValueError(f"unknown selector {self.selector!r}")
        if self.budget_mode not in ("total", "additional"):
            raise ValueError(f"unknown budget_mode {self.budget_mode!r}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        object.__setattr__(self, "initial_labeled",
                           tuple(int(i) for i in self.initial_labeled))
        if self.class_names is not None:
            object.__setattr__(self, "class_names",
                               tuple(str(c) for c in self.class_names))

    def resolve_budget(self, n_nodes):
        """Absolute label count for a dataset of ``n_nodes`` points."""
        if isinstance(self.budget, float) and self.budget <= 1.0:
            return int(np.ceil(self.budget * n_nodes))
        return int(self.budget)

    def with_seed(self, seed):
        """Copy with the run seed (and the core-set seed) replaced."""
        dac_params = None if self.dac is None else replace(self.dac, seed=seed)
        return replace(self, seed=seed, dac=dac_params)

    def to_json_dict(self):
        out = asdict(self)
        out["initial_labeled"] = list(self.initial_labeled)
        out["class_names"] = (None if self.class_names is None
                              else list(self.class_names))
        out["dac"] = None if self.dac is None else asdict(self.dac)
        return out

    @classmethod
    def from_json_dict(cls, data):
        data = dict(data)
        if data.get("dac") is not None:
            data["dac"] = DacParams(**data["dac"])
        if data.get("initial_labeled") is not None:
            data["initial_labeled"] = tuple(data["initial_labeled"])
        if data.get("class_names") is not None:
            data["class_names"] = tuple(data["class_names"])
        return cls(**data)

    def config_hash(self):
        """SHA-256 over the canonical JSON encoding."""
        canon = json.dumps(self.to_json_dict(), sort_keys=True,
                           separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


class GroundTruthOracle:
    """Instant oracle answering from a complete label array."""

    def __init__(self, y):
        self.y = np.asarray(y, dtype=np.int64)

    def __call__(self, ids):
        return {int(i): int(self.y[i]) for i in ids}


class ActiveLearningSession:
    """State machine for one active-learning run on a fixed graph.

    The flow is: :meth:`start` publishes the core-set as the pending query
    of iteration 0; each :meth:`submit_labels` call accumulates answers
    and, once the pending set is fully labeled, fits the classifier,
    records a history entry, and publishes the next query set (or
    finishes). Ground-truth runs drive this loop with an oracle via
    :func:`run_experiment`; the HTTP service drives it with human answers.
    """

    def __init__(self, config, graph, features=None, truth=None):
        self.config = config
        self.graph = graph
        self.features = None if features is None else check_features(features)
        self.truth = (None if truth is None
                      else check_labels(truth, graph.n_nodes, name="truth"))
        if config.n_classes is not None:
            self.n_classes = config.n_classes
        elif self.truth is not None:
            self.n_classes = int(self.truth.max()) + 1
        else:
            raise ValueError(
                "n_classes must be configured when no ground truth is given")
        if self.n_classes < 2:
            raise ValueError("need at least 2 classes")

        self.iteration = 0
        self.labeled_ids = []
        self.labels = {}
        self.pending = None
        self.pending_answers = {}
        self.history = []
        self.done = False
        self.started = False
        self._initial_cache = None
        self._scores = None
        self._cache = None

    @classmethod
    def from_features(cls, config, X, truth=None):
        """Build the graph from features per the config, then construct."""
        X = check_features(X)
        graph = build_similarity_graph(X, k=config.k, metric=config.metric,
                                       method=config.knn_method)
        return cls(config, graph, features=X, truth=truth)

    # -- loop ------------------------------------------------------------

    @property
    def n_labeled(self):
        return len(self.labeled_ids)

    @property
    def budget_target(self):
        """Total labeled count at which the run stops."""
        n = self.graph.n_nodes
        resolved = self.config.resolve_budget(n)
        if self.config.budget_mode == "additional":
            return len(self._initial_ids()) + resolved
        return resolved

    def _initial_ids(self):
        if self._initial_cache is None:
            raise RuntimeError("session not started")
        return self._initial_cache

    def candidates(self):
        """Currently unlabeled node ids, ascending."""
        mask = np.ones(self.graph.n_nodes, dtype=bool)
        if self.labeled_ids:
            mask[np.asarray(self.labeled_ids)] = False
        return np.nonzero(mask)[0]

    def start(self):
        """Construct the core-set and publish it as iteration 0's query."""
        if self.started:
            raise RuntimeError("session already started")
        cfg = self.config
        n = self.graph.n_nodes
        initial = check_indices(np.asarray(cfg.initial_labeled, dtype=np.int64),
                                n, name="initial_labeled", allow_empty=True)
        if cfg.dac is not None:
            core = dac(self.graph, initial=initial, params=cfg.dac)
        else:
            core = initial
        if core.size == 0:
            raise ValueError(
                "no initial labels: configure DAC or initial_labeled")
        self.started = True
        self._initial_cache = core
        target = self.budget_target
        if target > n:
            raise ValueError(f"budget {target} exceeds dataset size {n}")
        if target < core.size:
            warnings.warn(
                f"budget {target} is below the core-set size {core.size}; "
                "only the core-set evaluation will run",
                UserWarning, stacklevel=2)
        self.pending = QuerySet(ids=core, method="coreset", iteration=0)
        self.pending_answers = {}
        return self.pending

    def submit_labels(self, answers, iteration=None):
        """Record oracle answers {id: class} for the pending query set.

        Returns True when the submission completed the batch and the loop
        advanced. Raises KeyError for ids outside the pending set,
        ValueError for unknown classes, and StaleIterationError when
        ``iteration`` does not match the pending query.
        """
        if self.pending is None:
            raise StaleIterationError("no pending query set")
        if iteration is not None and iteration != self.pending.iteration:
            raise StaleIterationError(
                f"submission for iteration {iteration}, "
                f"pending is {self.pending.iteration}")
        pending_ids = set(int(i) for i in self.pending.ids)
        for i, c in answers.items():
            i, c = int(i), int(c)
            if i not in pending_ids:
                raise KeyError(f"node {i} is not in the pending query set")
            if not 0 <= c < self.n_classes:
                raise ValueError(f"unknown class {c} for node {i}")
        for i, c in answers.items():
            self.pending_answers[int(i)] = int(c)
        if len(self.pending_answers) == len(pending_ids):
            self._advance()
            return True
        return False

    def _fit(self):
        y_ids = np.asarray(self.labeled_ids, dtype=np.int64)
        y_cls = np.asarray([self.labels[i] for i in self.labeled_ids],
                           dtype=np.int64)
        state = LabelState(n_classes=self.n_classes, ids=y_ids, y=y_cls)
        t0 = time.perf_counter()
        pred = laplace_learning(self.graph, state, tol=self.config.tol,
                                warm_start=self._scores)
        fit_s = time.perf_counter() - t0
        self._scores = pred.scores
        return pred, fit_s

    def _acquire(self, pred, cand):
        cfg = self.config
        if cfg.acquisition == "uc":
            return uncertainty(pred, cand)
        if self._cache is None:
            self._cache = spectral_decompose(
                self.graph, m=cfg.m_eigen, tau=cfg.tau, gamma2=cfg.gamma2,
                seed=cfg.seed)
        if cfg.acquisition == "vopt":
            return vopt(self._cache, cand)
        if cfg.acquisition == "mc":
            return model_change(self._cache, pred, cand)
        return mc_vopt(self._cache, pred, cand)

    def _select(self, pred, take, iteration):
        cfg = self.config
        cand = self.candidates()
        acq = self._acquire(pred, cand)
        labeled = np.asarray(self.labeled_ids, dtype=np.int64)
        rng = np.random.default_rng((cfg.seed, iteration))
        if cfg.selector == "localmax":
            qs = local_max_batch(self.graph, acq, labeled, take,
                                 iteration=iteration)
        elif cfg.selector == "sequential":
            qs = sequential_select(acq, iteration=iteration)
        elif cfg.selector == "topmax":
            qs = top_max_batch(acq, take, iteration=iteration)
        elif cfg.selector == "random":
            qs = random_batch(cand, take, rng, iteration=iteration)
        else:
            qs = acq_sample_batch(acq, take, rng, iteration=iteration)
        return qs

    def _advance(self):
        qs = self.pending
        for i in qs.ids:
            self.labeled_ids.append(int(i))
            self.labels[int(i)] = self.pending_answers[int(i)]
        self.pending = None
        self.pending_answers = {}

        pred, fit_s = self._fit()
        acc = None if self.truth is None else accuracy(pred, self.truth)

        remaining = self.budget_target - self.n_labeled
        select_s = 0.0
        next_qs = None
        if remaining > 0 and self.n_labeled < self.graph.n_nodes:
            take = (1 if self.config.selector == "sequential"
                    else min(self.config.batch_size, remaining))
            t0 = time.perf_counter()
            next_qs = self._select(pred, take, self.iteration + 1)
            select_s = time.perf_counter() - t0
            if len(next_qs) == 0:
                next_qs = None

        self.history.append(HistoryEntry(
            iteration=self.iteration, n_labeled=self.n_labeled,
            accuracy=acc, fit_seconds=fit_s, select_seconds=select_s,
            method=qs.method))
        self.iteration += 1
        if next_qs is None:
            self.done = True
        else:
            self.pending = next_qs

    # -- persistence -----------------------------------------------------

    def to_snapshot(self):
        """JSON-serializable snapshot of the full session state."""
        return {
            "version": SNAPSHOT_VERSION,
            "config": self.config.to_json_dict(),
            "config_hash": self.config.config_hash(),
            "n_classes": self.n_classes,
            "state": {
                "iteration": self.iteration,
                "started": self.started,
                "done": self.done,
                "labeled_ids": list(self.labeled_ids),
                "labels": {str(k): v for k, v in self.labels.items()},
                "initial_ids": ([int(i) for i in self._initial_cache]
                                if self.started else None),
                "pending": (None if self.pending is None
                            else self.pending.to_json_dict()),
                "pending_answers": {str(k): v for k, v
                                    in self.pending_answers.items()},
                "history": [h.to_json_dict() for h in self.history],
                "scores": (None if self._scores is None
                           else self._scores.tolist()),
            },
        }

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_snapshot(), fh)

    @classmethod
    def load(cls, path, graph=None, features=None, truth=None):
        """Rebuild a session from a snapshot.

        The graph is not stored in the snapshot; pass it back in, or pass
        ``features`` to rebuild it deterministically from the config.
        """
        with open(path) as fh:
            snap = json.load(fh)
        if snap.get("version") != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version {snap.get('version')}")
        config = ExperimentConfig.from_json_dict(snap["config"])
        if graph is None:
            if features is None:
                raise ValueError("need a graph or features to restore")
            graph = build_similarity_graph(
                features, k=config.k, metric=config.metric,
                method=config.knn_method)
        session = cls(config, graph, features=features, truth=truth)
        session.n_classes = snap["n_classes"]
        st = snap["state"]
        session.iteration = st["iteration"]
        session.started = st["started"]
        session.done = st["done"]
        session.labeled_ids = [int(i) for i in st["labeled_ids"]]
        session.labels = {int(k): int(v) for k, v in st["labels"].items()}
        if st["initial_ids"] is not None:
            session._initial_cache = np.asarray(st["initial_ids"],
                                                dtype=np.int64)
        if st["pending"] is not None:
            session.pending = QuerySet(
                ids=np.asarray(st["pending"]["ids"], dtype=np.int64),
                method=st["pending"]["method"],
                iteration=st["pending"]["iteration"])
        session.pending_answers = {int(k): int(v) for k, v
                                   in st["pending_answers"].items()}
        session.history = [HistoryEntry(**h) for h in st["history"]]
        if st["scores"] is not None:
            session._scores = np.asarray(st["scores"])
        return session


def run_experiment(config, features=None, graph=None, truth=None,
                   return_session=False):
    """Run a full ground-truth-oracle experiment and return its history.

    Parameters
    ----------
    config : ExperimentConfig
    features : ndarray, optional
        Feature matrix; the graph is built per the config when no
        prebuilt ``graph`` is given.
    graph : SimilarityGraph, optional
    truth : array-like
        Complete ground-truth labels (the instant oracle).
    return_session : bool
        Also return the finished session.

    Returns
    -------
    history : list of HistoryEntry (also (history, session) when asked)
    """
    if truth is None:
        raise ValueError("run_experiment needs ground-truth labels; "
                         "use the service for human labeling")
    if graph is None:
        if features is None:
            raise ValueError("need features or a prebuilt graph")
        session = ActiveLearningSession.from_features(config, features,
                                                      truth=truth)
    else:
        session = ActiveLearningSession(config, graph, features=features,
                                        truth=truth)
    oracle = GroundTruthOracle(session.truth)
    session.start()
    while not session.done:
        session.submit_labels(oracle(session.pending.ids))
    if return_session:
        return session.history, session
    return session.history
