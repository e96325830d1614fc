"""One-dimensional flat-kernel Mean Shift over log frequencies.

The bandwidth is estimated from the data itself (mean k-th nearest-neighbor
distance with k a quantile of n), every point acts as a seed, and converged
seed positions are merged within one bandwidth to produce the final modes.
Clusters are ranked by descending mode, so rank 0 is the highest-frequency
band. Everything here is deterministic; there is no randomness to seed.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConfigurationError, DegenerateInputError
from .frequency import FrequencyTable


@dataclass(frozen=True)
class MeanShiftConfig:
    quantile: float = 0.3
    kernel: str = "flat"
    tolerance: float = 1e-7
    max_iterations: int = 500

    def validate(self) -> None:
        if not 0 < self.quantile <= 1:
            raise ConfigurationError(f"quantile must be in (0, 1], got {self.quantile!r}")
        if self.kernel != "flat":
            raise ConfigurationError(f"unsupported kernel: {self.kernel!r}")
        if not self.tolerance > 0:
            raise ConfigurationError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be at least 1")


@dataclass
class ClusterModel:
    """Mean Shift output: modes ranked descending plus member assignments.

    assignments maps each input key (lemma, or input position when the
    values came unlabeled) to a cluster rank; rank 0 is the cluster with
    the highest mode. Any two modes are more than one bandwidth apart.
    """

    bandwidth: float
    modes: list[float]
    assignments: dict = field(default_factory=dict)
    iterations_used: int = 0
    user_id: str | None = None

    @property
    def n_clusters(self) -> int:
        return len(self.modes)

    def cluster_sizes(self) -> list[int]:
        sizes = [0] * len(self.modes)
        for rank in self.assignments.values():
            sizes[rank] += 1
        return sizes


def estimate_bandwidth(values, quantile: float = 0.3) -> float:
    """Mean distance to the k-th nearest neighbor, k = max(1, floor(q*n)).

    k is capped at n-1 (a point has no k-th neighbor beyond that).
    """
    arr = np.asarray(values, dtype=np.float64).ravel()
    n = arr.size
    if n < 2:
        raise ValueError("bandwidth estimation needs at least two values")
    if not 0 < quantile <= 1:
        raise ValueError(f"quantile must be in (0, 1], got {quantile!r}")
    svals = np.sort(arr)
    if svals[0] == svals[-1]:
        raise DegenerateInputError("all values equal; bandwidth undefined")
    k = min(max(1, math.floor(quantile * n)), n - 1)
    return float(_kernels.knn_distances(svals, k).mean())


def _merge_modes(
    positions: np.ndarray, svals: np.ndarray, bandwidth: float
) -> list[float]:
    # support of a converged position = population of its window
    uniq, first = np.unique(positions, return_index=True)
    lo = np.searchsorted(svals, uniq - bandwidth, side="left")
    hi = np.searchsorted(svals, uniq + bandwidth, side="right")
    support = hi - lo
    # greedy acceptance: stronger support first, lower value on ties; a
    # candidate within one bandwidth of an accepted mode merges into it
    order = sorted(range(uniq.size), key=lambda i: (-int(support[i]), uniq[i]))
    accepted: list[float] = []
    for i in order:
        p = float(uniq[i])
        if all(abs(p - q) > bandwidth for q in accepted):
            accepted.append(p)
    return accepted


def mean_shift_1d(
    values,
    config: MeanShiftConfig | None = None,
    bandwidth: float | None = None,
    keys=None,
) -> ClusterModel:
    """Flat-kernel Mean Shift: every point is a seed, iterated to its mode.

    Each seed moves to the mean of all values within one bandwidth of it
    until the shift drops below the tolerance or the iteration cap is hit.
    Converged positions within one bandwidth of each other merge (higher
    support wins, ties go to the lower value); every input value is then
    assigned to its nearest surviving mode, ties to the higher mode.
    """
    config = config or MeanShiftConfig()
    config.validate()
    arr = np.asarray(values, dtype=np.float64).ravel()
    n = arr.size
    if n == 0:
        raise ValueError("cannot cluster an empty value set")
    if keys is not None and len(keys) != n:
        raise ValueError("keys must align one-to-one with values")
    if bandwidth is None:
        bandwidth = estimate_bandwidth(arr, config.quantile) if n > 1 else 1.0
    bandwidth = float(bandwidth)
    if not math.isfinite(bandwidth) or bandwidth <= 0:
        raise DegenerateInputError(f"degenerate bandwidth: {bandwidth!r}")

    order = np.argsort(arr, kind="stable")
    svals = arr[order]
    prefix = np.zeros(n + 1, dtype=np.float64)
    np.cumsum(svals, out=prefix[1:])
    positions, used = _kernels.shift_seeds(
        svals, prefix, svals.copy(), bandwidth, config.tolerance, config.max_iterations
    )

    modes = sorted(_merge_modes(positions, svals, bandwidth), reverse=True)
    marr = np.asarray(modes, dtype=np.float64)
    # nearest mode by original value; argmin takes the first minimum, which
    # is the higher mode since marr is descending
    labels = np.abs(arr[:, None] - marr[None, :]).argmin(axis=1)

    # drop modes that attracted no members (possible only in contrived
    # merge geometries) and relabel compactly
    occupied = sorted(set(int(r) for r in labels))
    if len(occupied) != len(modes):
        remap = {old: new for new, old in enumerate(occupied)}
        modes = [modes[old] for old in occupied]
        labels = np.array([remap[int(r)] for r in labels])

    if keys is None:
        keys = range(n)
    assignments = {k: int(r) for k, r in zip(keys, labels)}
    return ClusterModel(
        bandwidth=bandwidth,
        modes=[float(m) for m in modes],
        assignments=assignments,
        iterations_used=int(used),
    )


def cluster_user(table: FrequencyTable, config: MeanShiftConfig | None = None) -> ClusterModel:
    """Cluster one user's log frequencies, assignments keyed by lemma."""
    config = config or MeanShiftConfig()
    lemmas = table.sorted_lemmas()
    if len(lemmas) < 2:
        raise DegenerateInputError("clustering needs at least two lemmas")
    vals = np.array([table.log_freqs[w] for w in lemmas], dtype=np.float64)
    if np.unique(vals).size < 2:
        raise DegenerateInputError("all log-frequencies equal; nothing to cluster")
    model = mean_shift_1d(vals, config, keys=lemmas)
    model.user_id = table.user_id
    return model


@dataclass
class ClusterCountHistogram:
    counts: dict[int, int]
    modal: int


def cluster_count_histogram(models) -> ClusterCountHistogram:
    """Histogram of per-user cluster counts; modal ties go to the smaller."""
    models = list(models)
    if not models:
        raise ValueError("no cluster models to histogram")
    tally = Counter(m.n_clusters for m in models)
    modal = sorted(tally.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]
    return ClusterCountHistogram(counts=dict(sorted(tally.items())), modal=modal)
