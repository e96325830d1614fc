"""Acceptance gate: ten criteria, one printed verdict line each.

Every criterion asserts its stated tolerance and runtime budget; run with
`pytest tests/test_acceptance.py -v -s` to see all verdict lines. The
brute-force clustering oracle and the activity-rule table are shared with
the unit suites rather than re-derived here.
"""

import functools
import hashlib
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from test_clustering import oracle_mean_shift
from test_ingest import ACTIVITY_TABLE, NOW

from egowords.clustering import (
    MeanShiftConfig,
    cluster_count_histogram,
    cluster_user,
    mean_shift_1d,
)
from egowords.extraction import ExtractionConfig, count_lemmas, document_lemmas, lemmatize
from egowords.frequency import ccdf, lexical_richness, verbosity, word_frequencies
from egowords.ingest import Document, Timeline, WindowConfig, classify_activity
from egowords.layers import layer_size_regression, layers_from_sizes, scaling_ratios
from egowords.pipeline import PipelineConfig, run_pipeline, write_planted_corpus
from egowords.synth import (
    generate_planted_user,
    generate_power_law_samples,
    generate_zipf_user,
    planted_spec_for_k,
)
from egowords.tailfit import bootstrap_pvalue, fit_powerlaw


def _verdict(num: int, label: str, ok: bool, elapsed: float) -> None:
    mark = "PASS" if ok else "FAIL"
    print(f"criterion {num:2d}/10 {label}: {mark} [{elapsed:.1f}s]")


def criterion(num: int, label: str):
    """Print the verdict line whether the body passes or raises."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                fn(*args, **kwargs)
            except BaseException:
                _verdict(num, label, False, time.perf_counter() - t0)
                raise
            _verdict(num, label, True, time.perf_counter() - t0)

        return run

    return wrap


# planted users are shared between the recovery and invariance criteria
_PLANTED_CACHE: dict[int, list] = {}


def _planted_users(k: int) -> list:
    if k not in _PLANTED_CACHE:
        seeds = np.random.SeedSequence(900 + k).generate_state(100, np.uint64)
        entries = []
        for i in range(100):
            spec = planted_spec_for_k(
                k,
                separation=1.0,
                jitter_sd=0.08,
                words_base=6 + (i % 5),
                seed=int(seeds[i]),
            )
            table, _ = generate_planted_user(spec, f"planted-{k}-{i:03d}")
            entries.append((table, cluster_user(table)))
        _PLANTED_CACHE[k] = entries
    return _PLANTED_CACHE[k]


# ---------------------------------------------------------------------------
# 1. clustering matches a brute-force oracle


@criterion(1, "mean-shift oracle equivalence")
def test_mean_shift_matches_bruteforce_oracle():
    rng = np.random.default_rng(20260816)
    config = MeanShiftConfig(tolerance=1e-12, max_iterations=5000)
    t0 = time.perf_counter()
    for trial in range(200):
        n = int(rng.integers(2, 21))
        k = int(rng.integers(1, 4))
        centers = rng.uniform(0.0, 6.0, size=k)
        values = [float(v) for v in rng.choice(centers, size=n) + rng.normal(0, 0.15, n)]
        h = float(rng.uniform(0.2, 1.5))
        model = mean_shift_1d(values, config=config, bandwidth=h)
        want_modes, want_labels = oracle_mean_shift(values, h)
        order = sorted(range(n), key=lambda i: values[i])
        got_labels = [model.assignments[i] for i in order]
        assert got_labels == want_labels, f"trial {trial}: values={values} h={h}"
        assert len(model.modes) == len(want_modes), f"trial {trial}"
        for got, want in zip(model.modes, want_modes):
            assert abs(got - want) <= 1e-6, f"trial {trial}: {got} vs {want}"
    assert time.perf_counter() - t0 < 10.0


# ---------------------------------------------------------------------------
# 2. planted modes are recovered


@criterion(2, "planted-cluster recovery")
def test_planted_cluster_recovery():
    t0 = time.perf_counter()
    for k in (4, 5, 6, 7):
        models = [model for _, model in _planted_users(k)]
        hist = cluster_count_histogram(models)
        assert hist.modal == k, f"k={k}: modal recovered count is {hist.modal}"
        recovered = sum(1 for m in models if m.n_clusters == k)
        assert recovered >= 95, f"k={k}: only {recovered}/100 users recovered"
    assert time.perf_counter() - t0 < 60.0


# ---------------------------------------------------------------------------
# 3. the log base does not matter


@criterion(3, "log-base invariance")
def test_log_base_invariance():
    scale = math.log(10.0)  # log10(x) -> ln(x)
    for k in (4, 5, 6, 7):
        for table, model10 in _planted_users(k):
            lemmas = table.sorted_lemmas()
            ln_values = [table.log_freqs[w] * scale for w in lemmas]
            model_ln = mean_shift_1d(ln_values, keys=lemmas)
            assert model_ln.assignments == model10.assignments, table.user_id


# ---------------------------------------------------------------------------
# 4. layer algebra


@criterion(4, "layer algebra")
def test_layer_algebra():
    rng = np.random.default_rng(44)
    for _ in range(100):
        sizes = [int(v) for v in rng.integers(1, 500, size=int(rng.integers(1, 13)))]
        net = layers_from_sizes("u", sizes)
        assert net.layer_sizes == [sum(sizes[: i + 1]) for i in range(len(sizes))]
        back = [net.layer_sizes[0]] + [
            b - a for a, b in zip(net.layer_sizes, net.layer_sizes[1:])
        ]
        assert back == sizes
    got = scaling_ratios([5, 15, 50, 150])
    want = [3.0, 10.0 / 3.0, 3.0]
    assert len(got) == 3
    for g, w in zip(got, want):
        assert abs(g - w) <= 1e-12


# ---------------------------------------------------------------------------
# 5. cohort regressions against exact rational least squares


def _ols_exact(xs: list[int], ys: list[int]) -> tuple[Fraction, Fraction]:
    m = len(xs)
    sx, sy = Fraction(sum(xs)), Fraction(sum(ys))
    sxx = Fraction(sum(x * x for x in xs))
    sxy = Fraction(sum(x * y for x, y in zip(xs, ys)))
    slope = (m * sxy - sx * sy) / (m * sxx - sx * sx)
    return slope, (sy - slope * sx) / m


@criterion(5, "regression oracle")
def test_regression_matches_closed_form():
    rng = np.random.default_rng(55)
    for _ in range(100):
        k = int(rng.integers(2, 8))
        m = int(rng.integers(2, 41))
        while True:
            cohort = [
                layers_from_sizes(f"u{j}", [int(v) for v in rng.integers(1, 60, size=k)])
                for j in range(m)
            ]
            if len({net.layer_sizes[-1] for net in cohort}) > 1:
                break
        results = layer_size_regression(cohort)
        xs = [net.layer_sizes[-1] for net in cohort]
        for rank, got in enumerate(results, start=1):
            ys = [net.layer_sizes[rank - 1] for net in cohort]
            slope, intercept = _ols_exact(xs, ys)
            assert math.isclose(got.slope, float(slope), rel_tol=1e-9, abs_tol=1e-12)
            assert math.isclose(got.intercept, float(intercept), rel_tol=1e-9, abs_tol=1e-12)
        assert results[-1].slope == 1.0
        assert results[-1].intercept == 0.0


# ---------------------------------------------------------------------------
# 6. power-law fitting


@criterion(6, "power-law fitting")
def test_powerlaw_fitting():
    t0 = time.perf_counter()

    # fixed-cutoff MLE against the closed form
    rng = np.random.default_rng(66)
    for _ in range(10):
        values = rng.lognormal(0.5, 1.0, size=400)
        xmin = float(np.quantile(values, 0.4))
        fit = fit_powerlaw(values, xmin=xmin)
        tail = values[values >= xmin]
        want = 1.0 + tail.size / math.fsum(math.log(v / xmin) for v in tail)
        assert math.isclose(fit.alpha, want, rel_tol=1e-12)
        assert fit.n_tail == tail.size

    # exponent recovery on 10,000-sample synthetic tails
    for ai, alpha in enumerate((1.8, 2.5, 3.2)):
        hits = 0
        for trial in range(50):
            samples = generate_power_law_samples(alpha, 1.0, 10_000, seed=5000 + 100 * ai + trial)
            est = fit_powerlaw(samples, xmin=1.0).alpha
            hits += abs(est - alpha) <= 0.1
        assert hits >= 48, f"alpha={alpha}: {hits}/50 within 0.1"  # >= 95%

    # bootstrap p-values: centered when the model is right
    ps = []
    for s in range(20):
        values = generate_power_law_samples(2.5, 1.0, 500, seed=1000 + s)
        fit = fit_powerlaw(values)
        ps.append(bootstrap_pvalue(values, fit, n_boot=250, seed=s))
    assert 0.3 <= float(np.mean(ps)) <= 0.7, f"mean p {np.mean(ps)}"

    # ... and small when the data is exponential
    rejected = 0
    for s in range(20):
        srng = np.random.default_rng(2000 + s)
        values = srng.exponential(scale=1.0, size=2000) + 1.0
        fit = fit_powerlaw(values)
        rejected += bootstrap_pvalue(values, fit, n_boot=250, seed=s) < 0.05
    assert rejected >= 18, f"exponential rejected in {rejected}/20 seeds"  # >= 90%

    assert time.perf_counter() - t0 < 300.0


# ---------------------------------------------------------------------------
# 7. extraction reference outputs


@criterion(7, "extraction reference outputs")
def test_extraction_reference_outputs(extraction_reference):
    cfg = ExtractionConfig(
        stopword_list=extraction_reference["config"]["stopword_list"],
        lemmatizer=extraction_reference["config"]["lemmatizer"],
    )
    deviations = {d["id"]: d for d in extraction_reference["deviations"]}
    assert set(deviations) <= {c["id"] for c in extraction_reference["cases"]}
    for case in extraction_reference["cases"]:
        got = document_lemmas(case["text"], cfg)
        if case["id"] in deviations:
            assert got == deviations[case["id"]]["actual"], case["id"]
            assert got != case["expected"], f"{case['id']}: stale deviation entry"
        else:
            assert got == case["expected"], case["id"]
    assert lemmatize("chances") == "chance"
    assert lemmatize("ran") == "run"
    assert lemmatize("identified") == "identify"


# ---------------------------------------------------------------------------
# 8. windowing and activity rules


@criterion(8, "windowing and activity rules")
def test_activity_rule_table():
    assert len(ACTIVITY_TABLE) == 20
    seen = set()
    for case, timeline, expected in ACTIVITY_TABLE:
        got = classify_activity(timeline, WindowConfig(), now=NOW)
        assert got is expected, f"{case}: {got} != {expected}"
        seen.add(expected)
    assert len(seen) == 5  # every status branch exercised


# ---------------------------------------------------------------------------
# 9. end-to-end determinism


def _tree_digests(out_dir) -> dict[str, str]:
    return {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(out_dir.iterdir())
        if p.is_file()
    }


@criterion(9, "end-to-end determinism")
def test_end_to_end_determinism(tmp_path):
    src = tmp_path / "corpus"
    write_planted_corpus(src, users=10, k=5, seed=3)
    cfg = PipelineConfig(input_format="counts", seed=11)
    a = run_pipeline(src / "counts.csv", tmp_path / "a", cfg)
    b = run_pipeline(src / "counts.csv", tmp_path / "b", cfg)
    da, db = _tree_digests(a), _tree_digests(b)
    assert set(da) == set(db)
    assert da == db


# ---------------------------------------------------------------------------
# 10. statistics sanity


def _demo_timelines() -> list[Timeline]:
    sentences = [
        "The garden beetle visits the garden every sunny morning",
        "Sunny mornings bring the beetle back to the garden gate",
        "A quiet gate and a quiet garden keep the beetle happy",
    ]
    out = []
    for i in range(3):
        docs = [
            Document(user_id=f"user-{i}", timestamp=1_000_000 + 86_400 * d, text=sentences[(i + d) % 3])
            for d in range(12)
        ]
        out.append(Timeline(user_id=f"user-{i}", documents=docs, download_time=2_000_000))
    return out


@criterion(10, "statistics sanity")
def test_statistics_sanity(extraction_reference):
    fixture_docs = [
        Document(user_id="fixture", timestamp=1_000 + i, text=case["text"])
        for i, case in enumerate(extraction_reference["cases"])
    ]
    corpora = _demo_timelines() + [
        Timeline(user_id="fixture", documents=fixture_docs, download_time=10_000)
    ]
    tables = []
    for tl in corpora:
        assert lexical_richness(tl) <= verbosity(tl), tl.user_id
        tables.append(word_frequencies(count_lemmas(tl, ExtractionConfig(min_count=1)), 1.0))
    tables += [table for table, _ in _planted_users(5)]
    tables.append(generate_zipf_user(50, 1.2, 100_000))
    for table in tables:
        points = ccdf(list(table.freqs.values()))
        assert points[0][1] == 1.0, table.user_id
        for (_, a), (_, b) in zip(points, points[1:]):
            assert b <= a, table.user_id
