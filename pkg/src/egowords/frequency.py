"""Per-user usage frequencies and descriptive statistics.

A word's frequency is its occurrence count divided by the observation window
length in years, so values are occurrences per year and the smallest
observable frequency is min_count divided by the window. Log-transformed
values (base 10) ride along for the clustering stage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .extraction import ExtractionConfig, LemmaCounts, document_lemmas
from .ingest import Timeline


@dataclass
class FrequencyTable:
    """One user's lemma frequencies (occurrences per year) and their log10."""

    user_id: str
    window_years: float
    freqs: dict[str, float]
    log_freqs: dict[str, float]

    def __len__(self) -> int:
        return len(self.freqs)

    def sorted_lemmas(self) -> list[str]:
        # canonical order for clustering and serialization: ascending
        # frequency, lemma string as the tie-break
        return sorted(self.freqs, key=lambda w: (self.freqs[w], w))

    def log_values(self) -> np.ndarray:
        lemmas = self.sorted_lemmas()
        return np.array([self.log_freqs[w] for w in lemmas], dtype=np.float64)

    def values(self) -> np.ndarray:
        lemmas = self.sorted_lemmas()
        return np.array([self.freqs[w] for w in lemmas], dtype=np.float64)


def word_frequencies(lemma_counts: LemmaCounts, window_years: float) -> FrequencyTable:
    """Turn finalized counts into per-year frequencies over a T-year window."""
    if not window_years > 0:
        raise ValueError(f"window_years must be positive, got {window_years!r}")
    freqs = {}
    log_freqs = {}
    for lemma, count in lemma_counts.counts.items():
        f = count / window_years
        freqs[lemma] = f
        log_freqs[lemma] = math.log10(f)
    return FrequencyTable(
        user_id=lemma_counts.user_id,
        window_years=float(window_years),
        freqs=freqs,
        log_freqs=log_freqs,
    )


def ccdf(values) -> list[tuple[float, float]]:
    """Empirical P(X >= v) at each distinct value, ascending; starts at 1."""
    arr = np.sort(np.asarray(list(values), dtype=np.float64))
    if arr.size == 0:
        raise ValueError("ccdf of an empty value set")
    n = arr.size
    out = []
    for v in np.unique(arr):
        below = int(np.searchsorted(arr, v, side="left"))
        out.append((float(v), (n - below) / n))
    return out


def verbosity(timeline: Timeline, config: ExtractionConfig | None = None) -> float:
    """Mean extracted lexical tokens per document, before the min-count cut."""
    if not timeline.documents:
        raise ValueError("verbosity of an empty timeline")
    per_doc = [len(document_lemmas(d.text, config)) for d in timeline.documents]
    return sum(per_doc) / len(per_doc)


def lexical_richness(timeline: Timeline, config: ExtractionConfig | None = None) -> float:
    """Mean distinct lemmas per document, before the min-count cut."""
    if not timeline.documents:
        raise ValueError("lexical richness of an empty timeline")
    per_doc = [
        len(set(document_lemmas(d.text, config))) for d in timeline.documents
    ]
    return sum(per_doc) / len(per_doc)


def user_ci_aggregate(values, confidence: float = 0.95) -> tuple[float, float, float]:
    """Mean with a Student-t interval: mean +/- t(q, n-1) * s / sqrt(n)."""
    arr = np.asarray(list(values), dtype=np.float64)
    n = arr.size
    if n < 2:
        raise ValueError("confidence interval needs at least two values")
    if not 0 < confidence < 1:
        raise ValueError(f"confidence must be in (0, 1), got {confidence!r}")
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1))
    if sd == 0.0:
        return (mean, mean, mean)
    half = float(stats.t.ppf(0.5 + confidence / 2.0, n - 1)) * sd / math.sqrt(n)
    return (mean, mean - half, mean + half)
