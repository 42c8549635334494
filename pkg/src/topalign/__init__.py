"""Sparsified 0-dimensional persistence and topology-preserving alignment losses."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, DegenerateInput, DivergenceError, InvalidInput, TopAlignError
from .geometry import PointCloud, ThresholdRule, pairwise_distances, normalize_weights, threshold
from .filtration import (
    BoundCertificate,
    PersistenceDiagram,
    WeightedGraph,
    complete_graph,
    count_components_at,
    h0_diagram,
    h1_births,
    kruskal_mst,
    sparsify,
    verify_bound,
)
from .transport import (
    ProjectionSampler,
    bottleneck_diagrams,
    sliced_wasserstein_diagrams,
    sliced_wasserstein_points,
    wasserstein_1d,
    wasserstein_exact_diagrams,
    wasserstein_point_clouds,
)
from .losses import LossBreakdown, LossCoefficients, loss_dm, loss_pw, loss_ta, loss_total

__all__ = [
    "__version__",
    "BudgetExceeded", "DegenerateInput", "DivergenceError", "InvalidInput", "TopAlignError",
    "PointCloud", "ThresholdRule", "pairwise_distances", "normalize_weights", "threshold",
    "BoundCertificate", "PersistenceDiagram", "WeightedGraph", "complete_graph", "count_components_at",
    "h0_diagram", "h1_births", "kruskal_mst", "sparsify", "verify_bound",
    "ProjectionSampler", "bottleneck_diagrams", "sliced_wasserstein_diagrams", "sliced_wasserstein_points",
    "wasserstein_1d", "wasserstein_exact_diagrams", "wasserstein_point_clouds",
    "LossBreakdown", "LossCoefficients", "loss_dm", "loss_pw", "loss_ta", "loss_total",
]
