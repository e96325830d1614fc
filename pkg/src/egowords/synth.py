"""Synthetic users with known ground truth for validation and benchmarks.

Planted users place words at chosen log-frequency mode centers (optionally
jittered in log space), Zipf users follow a rank-power profile, and the
power-law sampler drives the tail-fitting oracle. All generators are
deterministic per seed and ground truth is returned alongside the data,
never re-inferred.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegenerateInputError
from .frequency import FrequencyTable

# synthetic lemmas are vowel-free so they can never collide with the stop
# word list or look like inflected English
_CONSONANTS = "bcdfghjklmnpqrstvwxz"


def _lemma_name(index: int) -> str:
    digits = []
    x = index
    while True:
        digits.append(_CONSONANTS[x % len(_CONSONANTS)])
        x //= len(_CONSONANTS)
        if x == 0:
            break
    while len(digits) < 4:
        digits.append(_CONSONANTS[0])
    return "".join(reversed(digits))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class PlantedSpec:
    """Ground-truth mode layout for one synthetic user.

    mode_centers are log10 occurrences-per-year; words_per_mode aligns with
    them. Frequencies are materialized as integer counts over the window
    (rounded half up, floored at 2), so realized log-frequencies are the
    quantized ones.
    """

    mode_centers: tuple[float, ...]
    words_per_mode: tuple[int, ...]
    jitter_sd: float = 0.0
    window_years: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if len(self.mode_centers) == 0:
            raise ValueError("at least one mode center required")
        if len(self.mode_centers) != len(self.words_per_mode):
            raise ValueError("mode_centers and words_per_mode must align")
        if any(w < 1 for w in self.words_per_mode):
            raise ValueError("each mode needs at least one word")
        if self.jitter_sd < 0:
            raise ValueError("jitter_sd must be non-negative")
        if not self.window_years > 0:
            raise ValueError("window_years must be positive")

    @property
    def k_modes(self) -> int:
        return len(self.mode_centers)

    @property
    def separation(self) -> float:
        if self.k_modes < 2:
            return math.inf
        return min(abs(a - b) for a, b in combinations(self.mode_centers, 2))


def generate_planted_user(
    spec: PlantedSpec, user_id: str = "planted-0"
) -> tuple[FrequencyTable, dict[str, int]]:
    """Materialize one planted user plus its lemma -> true-mode-rank truth.

    True mode ranks follow the clustering convention: rank 0 is the mode
    with the highest center.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed)))
    total_words = sum(spec.words_per_mode)
    jitter = (
        rng.normal(0.0, spec.jitter_sd, total_words)
        if spec.jitter_sd > 0
        else np.zeros(total_words)
    )
    rank_of_center = {
        c: r for r, c in enumerate(sorted(spec.mode_centers, reverse=True))
    }
    freqs: dict[str, float] = {}
    log_freqs: dict[str, float] = {}
    truth: dict[str, int] = {}
    word_index = 0
    for center, n_words in zip(spec.mode_centers, spec.words_per_mode):
        for _ in range(n_words):
            logf = center + jitter[word_index]
            count = max(2, _round_half_up((10.0**logf) * spec.window_years))
            lemma = _lemma_name(word_index)
            f = count / spec.window_years
            freqs[lemma] = f
            log_freqs[lemma] = math.log10(f)
            truth[lemma] = rank_of_center[center]
            word_index += 1
    if len(set(log_freqs.values())) < 2:
        raise DegenerateInputError("planted spec collapsed to fewer than two distinct values")
    table = FrequencyTable(
        user_id=user_id,
        window_years=float(spec.window_years),
        freqs=freqs,
        log_freqs=log_freqs,
    )
    return table, truth


def planted_spec_for_k(
    k: int,
    separation: float = 1.0,
    jitter_sd: float = 0.08,
    words_base: int = 6,
    window_years: float = 1.0,
    seed: int = 0,
) -> PlantedSpec:
    """Standard k-mode layout: geometric cluster sizes, fixed separation.

    Mode populations double toward the low-frequency end (words_base at the
    top), mirroring the inner-small/outer-large layer shape; centers sit
    high enough that count quantization stays negligible.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    centers = tuple(k + 0.5 - r * separation for r in range(k))
    words = tuple(words_base * (2**r) for r in range(k))
    return PlantedSpec(
        mode_centers=centers,
        words_per_mode=words,
        jitter_sd=jitter_sd,
        window_years=window_years,
        seed=seed,
    )


def generate_zipf_user(
    vocab_size: int,
    exponent: float,
    total_tokens: int,
    window_years: float = 1.0,
    seed: int = 0,
    user_id: str = "zipf-0",
    min_count: int = 2,
) -> FrequencyTable:
    """Rank-power count profile: counts proportional to rank**(-exponent).

    Counts are scaled to total_tokens, rounded half up, and the min-count
    filter drops tiny ranks. The seed is accepted for interface symmetry;
    construction is deterministic.
    """
    del seed
    if vocab_size < 2:
        raise ValueError("vocab_size must be at least 2")
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    if total_tokens < 1:
        raise ValueError("total_tokens must be positive")
    if not window_years > 0:
        raise ValueError("window_years must be positive")
    weights = [r ** (-exponent) for r in range(1, vocab_size + 1)]
    scale = total_tokens / sum(weights)
    freqs: dict[str, float] = {}
    log_freqs: dict[str, float] = {}
    for idx, w in enumerate(weights):
        count = _round_half_up(w * scale)
        if count < min_count:
            continue
        lemma = _lemma_name(idx)
        f = count / window_years
        freqs[lemma] = f
        log_freqs[lemma] = math.log10(f)
    return FrequencyTable(
        user_id=user_id,
        window_years=float(window_years),
        freqs=freqs,
        log_freqs=log_freqs,
    )


def generate_power_law_samples(
    alpha: float, xmin: float = 1.0, n: int = 1000, seed: int = 0
) -> np.ndarray:
    """Inverse-CDF samples x = xmin * (1-u)**(-1/(alpha-1)), u uniform."""
    if not alpha > 1:
        raise ValueError(f"alpha must exceed 1, got {alpha!r}")
    if not xmin > 0:
        raise ValueError(f"xmin must be positive, got {xmin!r}")
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    u = rng.random(n)
    return xmin * (1.0 - u) ** (-1.0 / (alpha - 1.0))
