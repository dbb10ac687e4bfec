"""Graph-based batch active learning.

Pipeline pieces: KNN similarity graphs over embedded features, Laplace
learning with hard label constraints, annulus core-set initialization,
acquisition functions, batch query selectors (LocalMax and baselines),
and an experiment/labeling harness with an HTTP service for human
annotation.
"""

from .acquisition import (AcquisitionVector, SpectralCache, mc_vopt,
                          model_change, spectral_decompose, uncertainty,
                          vopt)
from .coreset import DacParams, dac, density_radius, dijkstra_ball
from .graph import (KnnGraphBuilder, KnnIndex, SimilarityGraph,
                    angular_distance, build_graph, build_similarity_graph,
                    connected_components, knn_search)
from .laplace import (ConvergenceError, LabelState, LaplaceLearning,
                      Prediction, accuracy, laplace_learning, predict_labels)
from .selection import (QuerySet, acq_sample_batch, local_max_batch,
                        random_batch, sequential_select, top_max_batch)
from .session import (ActiveLearningSession, ExperimentConfig,
                      GroundTruthOracle, HistoryEntry, run_experiment)
from .synthetic import make_checkerboard, make_synthetic

__version__ = "0.1.0"

__all__ = [
    "AcquisitionVector", "SpectralCache", "mc_vopt", "model_change",
    "spectral_decompose", "uncertainty", "vopt",
    "DacParams", "dac", "density_radius", "dijkstra_ball",
    "KnnGraphBuilder", "KnnIndex", "SimilarityGraph", "angular_distance",
    "build_graph", "build_similarity_graph", "connected_components",
    "knn_search",
    "ConvergenceError", "LabelState", "LaplaceLearning", "Prediction",
    "accuracy", "laplace_learning", "predict_labels",
    "QuerySet", "acq_sample_batch", "local_max_batch", "random_batch",
    "sequential_select", "top_max_batch",
    "ActiveLearningSession", "ExperimentConfig", "GroundTruthOracle",
    "HistoryEntry", "run_experiment",
    "make_checkerboard", "make_synthetic",
    "__version__",
]
