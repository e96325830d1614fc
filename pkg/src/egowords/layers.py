"""Concentric layers over ranked clusters, with cohort-level analyses.

Layer i is the union of clusters 1..i in descending-frequency order, so
layer sizes are the prefix sums of cluster sizes and the outermost layer is
the whole vocabulary. Cohort analyses restrict to users sharing the modal
cluster count, then aggregate sizes/ratios and regress each layer's size on
the outermost one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

import numpy as np

from .clustering import ClusterModel, cluster_count_histogram
from .errors import DegenerateInputError
from .frequency import user_ci_aggregate


@dataclass
class EgoNetworkOfWords:
    user_id: str
    cluster_sizes: list[int]
    layer_sizes: list[int]
    scaling_ratios: list[float]

    @property
    def n_layers(self) -> int:
        return len(self.layer_sizes)


@dataclass
class RegressionResult:
    layer_rank: int
    slope: float
    intercept: float
    r_squared: float
    n_users: int


@dataclass
class LayerAggregate:
    rank: int
    mean: float
    ci_low: float
    ci_high: float
    n_users: int


def scaling_ratios(layer_sizes) -> list[float]:
    """Consecutive layer-size quotients; input must be strictly increasing."""
    sizes = [float(s) for s in layer_sizes]
    if any(s <= 0 for s in sizes):
        raise ValueError("layer sizes must be positive")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("layer sizes must be strictly increasing")
    return [b / a for a, b in zip(sizes, sizes[1:])]


def layers_from_sizes(user_id: str, cluster_sizes) -> EgoNetworkOfWords:
    """Cumulative layers from rank-ordered cluster sizes."""
    sizes = [int(s) for s in cluster_sizes]
    if not sizes:
        raise ValueError("at least one cluster is required")
    if any(s < 1 for s in sizes):
        raise ValueError("cluster sizes must be positive")
    layer_sizes = list(accumulate(sizes))
    ratios = [b / a for a, b in zip(layer_sizes, layer_sizes[1:])]
    return EgoNetworkOfWords(
        user_id=user_id,
        cluster_sizes=sizes,
        layer_sizes=layer_sizes,
        scaling_ratios=ratios,
    )


def build_layers(model: ClusterModel) -> EgoNetworkOfWords:
    """Cumulative layers from a cluster model (ranks already mode-descending)."""
    return layers_from_sizes(model.user_id or "", model.cluster_sizes())


def modal_cohort(models) -> list[ClusterModel]:
    """Users whose cluster count equals the most common count."""
    models = list(models)
    hist = cluster_count_histogram(models)
    return [m for m in models if m.n_clusters == hist.modal]


def _ols(x: np.ndarray, y: np.ndarray, through_origin: bool) -> tuple[float, float, float]:
    if through_origin:
        sxx = float(np.dot(x, x))
        if sxx == 0.0:
            raise DegenerateInputError("predictor is identically zero")
        slope = float(np.dot(x, y)) / sxx
        intercept = 0.0
        resid = y - slope * x
        ss_res = float(np.dot(resid, resid))
        ss_tot = float(np.dot(y, y))
    else:
        xm = float(x.mean())
        ym = float(y.mean())
        dx = x - xm
        dy = y - ym
        sxx = float(np.dot(dx, dx))
        if sxx == 0.0:
            raise DegenerateInputError("predictor has zero variance")
        slope = float(np.dot(dx, dy)) / sxx
        intercept = ym - slope * xm
        resid = y - (slope * x + intercept)
        ss_res = float(np.dot(resid, resid))
        ss_tot = float(np.dot(dy, dy))
    r2 = 1.0 if ss_tot == 0.0 and ss_res == 0.0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r2


def _check_cohort(networks) -> tuple[list[EgoNetworkOfWords], int]:
    networks = list(networks)
    if len(networks) < 2:
        raise ValueError("cohort analyses need at least two users")
    k = networks[0].n_layers
    if any(net.n_layers != k for net in networks):
        raise ValueError("cohort users must share one cluster count")
    return networks, k


def layer_size_regression(networks, through_origin: bool = False) -> list[RegressionResult]:
    """OLS of each layer's size on the outermost layer's size across users.

    The outermost layer regressed on itself yields slope 1, intercept 0
    exactly. Degenerate outermost variance (all vocabularies equal) is an
    error since every regression would be vertical.
    """
    networks, k = _check_cohort(networks)
    x = np.array([net.layer_sizes[-1] for net in networks], dtype=np.float64)
    results = []
    for rank in range(1, k + 1):
        y = np.array([net.layer_sizes[rank - 1] for net in networks], dtype=np.float64)
        slope, intercept, r2 = _ols(x, y, through_origin)
        results.append(
            RegressionResult(
                layer_rank=rank,
                slope=slope,
                intercept=intercept,
                r_squared=r2,
                n_users=len(networks),
            )
        )
    return results


def cohort_layer_summary(networks) -> tuple[list[LayerAggregate], list[LayerAggregate]]:
    """Per-rank mean layer size and mean scaling ratio with 95% intervals.

    Ratio rank i aggregates layer_{i+1}/layer_i, so there are k-1 ratio rows
    for a k-layer cohort.
    """
    networks, k = _check_cohort(networks)
    n = len(networks)
    size_rows = []
    for rank in range(1, k + 1):
        mean, lo, hi = user_ci_aggregate(net.layer_sizes[rank - 1] for net in networks)
        size_rows.append(LayerAggregate(rank, mean, lo, hi, n))
    ratio_rows = []
    for rank in range(1, k):
        mean, lo, hi = user_ci_aggregate(net.scaling_ratios[rank - 1] for net in networks)
        ratio_rows.append(LayerAggregate(rank, mean, lo, hi, n))
    return size_rows, ratio_rows
