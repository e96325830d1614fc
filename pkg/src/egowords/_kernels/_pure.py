"""NumPy implementations of the hot kernels.

These are the reference semantics; ``_speedups.pyx`` mirrors them operation
for operation. ``shift_seeds`` and ``knn_distances`` use only +,-,*,/ and
comparisons, so the two backends are bit-identical there. ``tail_scan`` goes
through exp(), where NumPy's vectorized code may differ from libm in the last
ulp; callers should not rely on bit equality across backends for it.
"""

from __future__ import annotations

import numpy as np


def shift_seeds(
    values: np.ndarray,
    prefix: np.ndarray,
    seeds: np.ndarray,
    bandwidth: float,
    tol: float,
    max_iter: int,
) -> tuple[np.ndarray, int]:
    """Iterate every seed to its local flat-window mean fixed point.

    ``values`` must be sorted ascending and ``prefix`` its length-(n+1)
    prefix-sum array. Each seed x is repeatedly replaced by the mean of the
    values in [x - bandwidth, x + bandwidth] until the move is < tol or
    max_iter updates were made. Returns the final positions and the largest
    per-seed update count.
    """
    x = np.array(seeds, dtype=np.float64, copy=True)
    m = x.shape[0]
    counts = np.zeros(m, dtype=np.int64)
    active = np.arange(m)
    it = 0
    while active.size and it < max_iter:
        xa = x[active]
        lo = np.searchsorted(values, xa - bandwidth, side="left")
        hi = np.searchsorted(values, xa + bandwidth, side="right")
        nonempty = hi > lo
        act = active[nonempty]
        if act.size == 0:
            break
        nx = (prefix[hi[nonempty]] - prefix[lo[nonempty]]) / (hi[nonempty] - lo[nonempty])
        it += 1
        counts[act] = it
        moved = np.abs(nx - x[act]) >= tol
        x[act] = nx
        active = act[moved]
    used = int(counts.max()) if m else 0
    return x, used


def knn_distances(values: np.ndarray, k: int) -> np.ndarray:
    """Distance from each point to its k-th nearest neighbour (self excluded).

    ``values`` must be sorted ascending, 1 <= k <= n-1. For point i the k
    nearest neighbours occupy a contiguous window; the distance is minimised
    over the k+1 ways of splitting the window left/right of i.
    """
    n = values.shape[0]
    best = np.full(n, np.inf)
    idx = np.arange(n)
    for take_left in range(k + 1):
        take_right = k - take_left
        feasible = (idx >= take_left) & (idx + take_right <= n - 1)
        left = np.zeros(n)
        if take_left > 0:
            left[take_left:] = values[take_left:] - values[:-take_left]
        right = np.zeros(n)
        if take_right > 0:
            right[: n - take_right] = values[take_right:] - values[: n - take_right]
        cand = np.maximum(left, right)
        best = np.where(feasible, np.minimum(best, cand), best)
    return best


def tail_scan(
    values: np.ndarray,
    ln_values: np.ndarray,
    ln_suffix: np.ndarray,
    max_candidates: int,
) -> tuple[int, float, float, int]:
    """Scan distinct lower cutoffs for the best continuous power-law tail.

    ``values`` sorted ascending; ``ln_values`` their logs; ``ln_suffix`` the
    length-(n+1) suffix sums of ``ln_values``. For each candidate start index
    the tail exponent comes from the closed-form MLE and the fit quality from
    the two-sided Kolmogorov-Smirnov distance. Candidates whose tail would be
    a single point or all-equal are skipped; at most ``max_candidates``
    distinct values are considered, smallest first. Ties keep the smaller
    cutoff. Returns (best_start_index, alpha, ks, candidates_scanned);
    best_start_index is -1 when no candidate was usable.
    """
    n = values.shape[0]
    best_idx = -1
    best_alpha = 0.0
    best_ks = np.inf
    scanned = 0
    for i in range(n - 1):
        if i > 0 and values[i] == values[i - 1]:
            continue
        if scanned == max_candidates:
            break
        scanned += 1
        if values[n - 1] == values[i]:
            continue
        ntail = n - i
        lnx = ln_values[i]
        s = ln_suffix[i] - ntail * lnx
        alpha = 1.0 + ntail / s
        fit = 1.0 - np.exp(-(alpha - 1.0) * (ln_values[i:] - lnx))
        steps = np.arange(ntail, dtype=np.float64)
        d_lo = np.abs(fit - steps / ntail)
        d_hi = np.abs(fit - (steps + 1.0) / ntail)
        d = max(float(d_lo.max()), float(d_hi.max()))
        if d < best_ks:
            best_ks = d
            best_idx = i
            best_alpha = alpha
    return best_idx, best_alpha, best_ks, scanned
