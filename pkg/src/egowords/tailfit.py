"""Continuous power-law tail fits with KS cutoff selection and bootstrap.

The exponent is the continuous maximum-likelihood estimate
alpha = 1 + n / sum(ln(x / xmin)) over the tail x >= xmin; the cutoff is
chosen by scanning candidate xmin values (the distinct observations,
smallest 1000 for large vocabularies) and keeping the one minimizing the
two-sided KS distance between the empirical tail and the fitted law. The
p-value comes from a semi-parametric bootstrap: each replicate redraws the
body empirically and the tail from the fitted law, is refit from scratch,
and its KS distance is compared against the observed one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateInputError, InsufficientDataError

# identifies the bootstrap stream scheme in serialized output: PCG64
# generators spawned per replicate from one SeedSequence, so parallel and
# serial replicate orders agree
RNG_ID = "pcg64-seedseq-spawn"

MIN_FIT_VALUES = 10


@dataclass
class TailFit:
    alpha: float
    xmin: float
    ks_distance: float
    n_tail: int
    p_value: float | None = None


def _prepare(values) -> np.ndarray:
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size == 0:
        raise ValueError("no values to fit")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError("power-law fitting needs positive finite values")
    return np.sort(arr)


def _ks_at(tail: np.ndarray, alpha: float, xmin: float) -> float:
    # two-sided KS: compare the fitted CDF against both corners of each
    # empirical step
    n = tail.size
    fitted = 1.0 - np.exp(-(alpha - 1.0) * (np.log(tail) - math.log(xmin)))
    steps = np.arange(n, dtype=np.float64)
    lo = np.abs(fitted - steps / n).max()
    hi = np.abs(fitted - (steps + 1.0) / n).max()
    return float(max(lo, hi))


def fit_powerlaw(values, xmin: float | None = None, max_candidates: int = 1000) -> TailFit:
    """Fit a continuous power law to the tail of ``values``.

    With xmin=None the cutoff is selected by the KS scan over distinct
    observed values (ties broken toward the smaller cutoff) and at least
    MIN_FIT_VALUES observations are required. A forced xmin skips the scan
    and only needs two non-equal tail values.
    """
    svals = _prepare(values)
    if xmin is not None:
        if not xmin > 0:
            raise ValueError(f"xmin must be positive, got {xmin!r}")
        tail = svals[np.searchsorted(svals, xmin, side="left") :]
        if tail.size < 2:
            raise InsufficientDataError("fewer than two values at or above xmin")
        if tail[0] == tail[-1]:
            raise DegenerateInputError("tail values all equal")
        s = float(np.log(tail).sum() - tail.size * math.log(xmin))
        alpha = 1.0 + tail.size / s
        return TailFit(alpha=alpha, xmin=float(xmin), ks_distance=_ks_at(tail, alpha, xmin), n_tail=int(tail.size))

    if svals.size < MIN_FIT_VALUES:
        raise InsufficientDataError(
            f"power-law fitting needs at least {MIN_FIT_VALUES} values, got {svals.size}"
        )
    if svals[0] == svals[-1]:
        raise DegenerateInputError("all values equal; no tail to fit")
    ln = np.log(svals)
    ln_suffix = np.zeros(svals.size + 1, dtype=np.float64)
    ln_suffix[:-1] = np.cumsum(ln[::-1])[::-1]
    best_idx, alpha, ks, _scanned = _kernels.tail_scan(svals, ln, ln_suffix, max_candidates)
    if best_idx < 0:
        raise DegenerateInputError("no admissible tail cutoff")
    return TailFit(
        alpha=float(alpha),
        xmin=float(svals[best_idx]),
        ks_distance=float(ks),
        n_tail=int(svals.size - best_idx),
    )


def _replicate_ks(sample: np.ndarray, max_candidates: int) -> float:
    # a replicate that cannot be fit at all counts as maximally extreme
    svals = np.sort(sample)
    if svals[0] == svals[-1]:
        return math.inf
    ln = np.log(svals)
    ln_suffix = np.zeros(svals.size + 1, dtype=np.float64)
    ln_suffix[:-1] = np.cumsum(ln[::-1])[::-1]
    best_idx, _alpha, ks, _scanned = _kernels.tail_scan(svals, ln, ln_suffix, max_candidates)
    if best_idx < 0:
        return math.inf
    return float(ks)


def bootstrap_pvalue(
    values, fit: TailFit, n_boot: int = 1000, seed: int = 0, max_candidates: int = 1000
) -> float:
    """Semi-parametric bootstrap p-value for a fitted tail.

    Each replicate draws, per observation, either a uniform resample of the
    below-xmin body or an inverse-CDF draw from the fitted law, then refits
    with a fresh cutoff scan. p is the fraction of replicate KS distances at
    or above the observed one; resolution is 1/n_boot. Deterministic for a
    fixed seed: replicate i always consumes the i-th spawned stream.
    """
    if n_boot < 100:
        raise ValueError(f"n_boot must be at least 100, got {n_boot}")
    arr = _prepare(values)
    if arr.size == 0:
        raise ValueError("no values to bootstrap")
    below = arr[arr < fit.xmin]
    n = arr.size
    p_below = below.size / n
    inv_exp = -1.0 / (fit.alpha - 1.0)
    streams = np.random.SeedSequence(seed).spawn(n_boot)
    extreme = 0
    for child in streams:
        rng = np.random.Generator(np.random.PCG64(child))
        pick = rng.random(n) < p_below
        n_body = int(pick.sum())
        sample = np.empty(n, dtype=np.float64)
        if n_body:
            sample[pick] = below[rng.integers(0, below.size, n_body)]
        if n_body < n:
            u = rng.random(n - n_body)
            sample[~pick] = fit.xmin * (1.0 - u) ** inv_exp
        if _replicate_ks(sample, max_candidates) >= fit.ks_distance:
            extreme += 1
    return extreme / n_boot


def rejection_table(p_values, thresholds: tuple[float, ...] = (0.1, 0.05, 0.01)) -> dict[float, float]:
    """Fraction of users whose p-value falls strictly below each threshold."""
    pvals = [float(p) for p in p_values]
    if not pvals:
        raise ValueError("no p-values to tabulate")
    return {t: sum(p < t for p in pvals) / len(pvals) for t in thresholds}
