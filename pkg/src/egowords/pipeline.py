"""Pipeline orchestration: stages, intermediate file formats, manifest.

Each stage reads and writes files in one output directory so stages can be
rerun individually. All emitted numbers use round-trip float formatting and
all row orders are canonical (sorted by user id, then lemma/rank), so a rerun
with identical inputs and configuration reproduces every output byte for
byte. The manifest records the configuration snapshot, input digest, and
per-stage record counts; it deliberately contains no wall-clock values.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields as dataclass_fields, asdict
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .errors import (
    ConfigurationError,
    DegenerateInputError,
    EgowordsError,
    EmptyCorpusError,
    InputError,
    InsufficientDataError,
    StageDependencyError,
    StageError,
)
from .extraction import ExtractionConfig, LemmaCounts, count_lemmas, SOCIAL_KINDS
from .frequency import (
    FrequencyTable,
    ccdf,
    lexical_richness,
    user_ci_aggregate,
    verbosity,
    word_frequencies,
)
from .clustering import MeanShiftConfig, cluster_count_histogram, cluster_user
from .ingest import (
    ActivityStatus,
    Timeline,
    WindowConfig,
    classify_activity,
    dataset_summary,
    filter_documents,
    parse_timeline_stream,
    read_timelines,
    trim_to_window,
    write_timelines,
)
from .layers import (
    EgoNetworkOfWords,
    layer_size_regression,
    layers_from_sizes,
    cohort_layer_summary,
)
from .tailfit import RNG_ID, bootstrap_pvalue, fit_powerlaw, rejection_table

REPORT_FILES = (
    "ccdf.csv",
    "verbosity.csv",
    "richness.csv",
    "cluster_hist.csv",
    "layers.csv",
    "ratios.csv",
    "regression.csv",
    "dataset_summary.csv",
    "removed_tokens.csv",
    "tailfit_rejections.csv",
)

REMOVED_KINDS = SOCIAL_KINDS + ("stopword", "hapax")


# ---------------------------------------------------------------------------
# configuration


@dataclass
class PipelineConfig:
    """Every pipeline knob, mirroring the CLI flags and config-file keys."""

    label: str = "corpus"
    input_format: str = "timelines"
    language: str = "en"
    window_years: float = 1.0
    abandon_months: float = 6.0
    sporadic_fraction: float = 0.5
    api_cap: int = 3200
    reference_time: int | None = None
    stopwords: str = "builtin"
    lemmatizer: str = "builtin"
    min_count: int = 2
    quantile: float = 0.3
    tolerance: float = 1e-7
    max_iterations: int = 500
    regression_through_origin: bool = False
    boot: int = 100
    max_candidates: int = 1000
    seed: int = 0
    jobs: int = 1

    def window_config(self) -> WindowConfig:
        # whole months map onto the fixed 365.25-day year
        days = math.floor(self.abandon_months * 365.25 / 12.0)
        return WindowConfig(
            window_years=self.window_years,
            abandonment_days=float(days),
            sporadic_fraction=self.sporadic_fraction,
            api_cap=self.api_cap,
        )

    def extraction_config(self) -> ExtractionConfig:
        return ExtractionConfig(
            stopword_list=self.stopwords,
            lemmatizer=self.lemmatizer,
            min_count=self.min_count,
        )

    def meanshift_config(self) -> MeanShiftConfig:
        return MeanShiftConfig(
            quantile=self.quantile,
            tolerance=self.tolerance,
            max_iterations=self.max_iterations,
        )

    def to_dict(self) -> dict:
        return asdict(self)


def parse_config_file(path) -> dict[str, str]:
    """Read simple key=value lines; '#' starts a comment, blanks ignored."""
    values: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _coerce_flag(name: str, kind: type, raw: str):
    if raw.lower() in {"", "none"}:
        return None
    if kind is bool:
        low = raw.lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise ConfigurationError(f"{name}: expected a boolean, got {raw!r}")
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
    except ValueError:
        raise ConfigurationError(f"{name}: expected {kind.__name__}, got {raw!r}") from None
    return raw


def build_config(file_values: dict[str, str] | None = None, overrides: dict | None = None) -> PipelineConfig:
    """Layer defaults <- config file <- explicit overrides (CLI flags)."""
    kinds = {"reference_time": int, "abandon_months": float}
    for f in dataclass_fields(PipelineConfig):
        kinds.setdefault(f.name, type(f.default) if f.default is not None else str)
    merged: dict = {}
    for key, raw in (file_values or {}).items():
        if key not in kinds:
            raise ConfigurationError(f"unknown configuration key: {key!r}")
        merged[key] = _coerce_flag(key, kinds[key], raw)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    return PipelineConfig(**merged)


# ---------------------------------------------------------------------------
# serialization helpers


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def _write_jsonl(path: Path, records) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False))
            fh.write("\n")


def _read_jsonl(path: Path) -> list[dict]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _require(out_dir: Path, filename: str, stage: str) -> Path:
    path = out_dir / filename
    if not path.exists():
        raise StageDependencyError(
            f"{filename} is missing; run the {stage} stage first", stage=stage
        )
    return path


def _load_manifest(out_dir: Path) -> dict:
    path = out_dir / "manifest.json"
    if path.exists():
        return json.loads(path.read_text(encoding="utf-8"))
    return {
        "tool": {"name": "egowords", "version": __version__, "kernel_backend": BACKEND},
        "config": {},
        "input": {},
        "timestamps": {},
        "stages": {},
    }


def _save_manifest(out_dir: Path, manifest: dict) -> None:
    manifest.setdefault("tool", {})
    manifest["tool"] = {
        "name": "egowords",
        "version": __version__,
        "kernel_backend": BACKEND,
    }
    text = json.dumps(manifest, sort_keys=True, indent=2, ensure_ascii=False)
    (out_dir / "manifest.json").write_text(text + "\n", encoding="utf-8")


def _record_stage(out_dir: Path, cfg: PipelineConfig, stage: str, stats: dict) -> None:
    # Stage entries carry their own config snapshot: stages are individually
    # invocable, so the run-level snapshot alone could go stale.
    manifest = _load_manifest(out_dir)
    manifest["config"].update(cfg.to_dict())
    manifest["stages"][stage] = {"config": cfg.to_dict(), "stats": stats}
    _save_manifest(out_dir, manifest)


def _parallel_map(worker, items, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [worker(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, items, chunksize=max(1, len(items) // (jobs * 4))))


# ---------------------------------------------------------------------------
# counts / frequency table file formats


def write_counts_csv(path: Path, counts: list[LemmaCounts]) -> None:
    rows = []
    for lc in sorted(counts, key=lambda c: c.user_id):
        for lemma in sorted(lc.counts):
            rows.append((lc.user_id, lemma, lc.counts[lemma]))
    _write_csv(path, ["user_id", "lemma", "count"], rows)


def read_counts_csv(path: Path) -> list[LemmaCounts]:
    per_user: dict[str, dict[str, int]] = {}
    for row in _read_csv(path):
        try:
            user = row["user_id"]
            lemma = row["lemma"]
            count = int(row["count"])
        except (KeyError, TypeError, ValueError):
            raise InputError(f"bad counts row in {path}: {row!r}") from None
        if user is None or lemma is None:
            raise InputError(f"bad counts row in {path}: {row!r}")
        per_user.setdefault(user, {})[lemma] = count
    out = []
    for user in sorted(per_user):
        counts = dict(sorted(per_user[user].items()))
        total = sum(counts.values())
        out.append(
            LemmaCounts(
                user_id=user,
                counts=counts,
                total_word_tokens=total,
                removed_tallies={k: 0 for k in REMOVED_KINDS},
                total_tokens=total,
            )
        )
    return out


def _read_frequency_tables(path: Path) -> list[FrequencyTable]:
    per_user: dict[str, tuple[dict, dict]] = {}
    window: dict[str, float] = {}
    for row in _read_csv(path):
        user = row["user_id"]
        freqs, logs = per_user.setdefault(user, ({}, {}))
        freqs[row["lemma"]] = float(row["frequency"])
        logs[row["lemma"]] = float(row["log10_frequency"])
        window[user] = float(row["window_years"])
    return [
        FrequencyTable(user_id=user, window_years=window[user], freqs=f, log_freqs=g)
        for user, (f, g) in sorted(per_user.items())
    ]


# ---------------------------------------------------------------------------
# stages


def stage_ingest(input_path, out_dir: Path, cfg: PipelineConfig) -> dict:
    """Parse, filter, classify, and window-trim raw timelines."""
    out_dir.mkdir(parents=True, exist_ok=True)
    window = cfg.window_config()
    with open(input_path, "rb") as fh:
        parsed = parse_timeline_stream(fh)

    status_rows: list[tuple[str, str]] = []
    status_tally = {status.value: 0 for status in ActivityStatus}
    kept: list[Timeline] = []
    removed_retweet = 0
    removed_language = 0
    empty_after_filter = 0
    too_short = 0
    empty_window = 0
    documents_in = 0
    documents_after_filter = 0
    max_download = None

    for timeline in parsed.timelines:
        documents_in += len(timeline.documents)
        if max_download is None or timeline.download_time > max_download:
            max_download = timeline.download_time
        filtered, tally = filter_documents(timeline, cfg.language)
        removed_retweet += tally.retweet
        removed_language += tally.language
        if not filtered.documents:
            empty_after_filter += 1
            continue
        documents_after_filter += len(filtered.documents)
        status = classify_activity(filtered, window, now=cfg.reference_time)
        status_rows.append((timeline.user_id, status.value))
        status_tally[status.value] += 1
        if status is not ActivityStatus.ACTIVE:
            continue
        trimmed = trim_to_window(filtered, cfg.window_years, cfg.reference_time)
        if trimmed is None:
            too_short += 1
            continue
        if not trimmed.documents:
            empty_window += 1
            continue
        kept.append(trimmed)

    write_timelines(out_dir / "timelines.jsonl", kept)
    _write_csv(out_dir / "activity.csv", ["user_id", "status"], sorted(status_rows))

    stats = {
        "lines_total": parsed.total_lines,
        "lines_malformed": parsed.malformed,
        "users_parsed": len(parsed.timelines),
        "documents_parsed": documents_in,
        "removed_retweet": removed_retweet,
        "removed_language": removed_language,
        "documents_after_filter": documents_after_filter,
        "users_empty_after_filter": empty_after_filter,
        "statuses": status_tally,
        "users_window_too_short": too_short,
        "users_empty_window": empty_window,
        "users_kept": len(kept),
        "documents_kept": sum(len(t.documents) for t in kept),
    }
    manifest = _load_manifest(out_dir)
    manifest["config"].update(cfg.to_dict())
    manifest["input"] = {
        "path": str(input_path),
        "sha256": _sha256(Path(input_path)),
        "format": "timelines",
    }
    manifest["timestamps"] = {
        "reference_time": cfg.reference_time,
        "max_download_time": max_download,
    }
    manifest["stages"]["ingest"] = {"config": cfg.to_dict(), "stats": stats}
    _save_manifest(out_dir, manifest)
    return stats


def stage_seed_counts(input_path, out_dir: Path, cfg: PipelineConfig) -> dict:
    """Adopt an existing lemma-counts file as the extract stage's output."""
    out_dir.mkdir(parents=True, exist_ok=True)
    counts = read_counts_csv(Path(input_path))
    write_counts_csv(out_dir / "counts.csv", counts)
    stats_records = []
    for lc in counts:
        stats_records.append(
            {
                "user_id": lc.user_id,
                "source": cfg.label,
                "n_documents": None,
                "total_tokens": lc.total_tokens,
                "total_word_tokens": lc.total_word_tokens,
                "removed": {k: 0 for k in REMOVED_KINDS},
                "verbosity": None,
                "lexical_richness": None,
            }
        )
    _write_jsonl(out_dir / "extract_stats.jsonl", stats_records)
    stats = {
        "users": len(counts),
        "lemma_rows": sum(len(lc.counts) for lc in counts),
    }
    manifest = _load_manifest(out_dir)
    manifest["config"].update(cfg.to_dict())
    manifest["input"] = {
        "path": str(input_path),
        "sha256": _sha256(Path(input_path)),
        "format": "counts",
    }
    manifest["timestamps"] = {
        "reference_time": cfg.reference_time,
        "max_download_time": None,
    }
    manifest["stages"]["ingest-counts"] = {"config": cfg.to_dict(), "stats": stats}
    _save_manifest(out_dir, manifest)
    return stats


def _extract_worker(args) -> tuple[LemmaCounts, dict]:
    timeline, ec = args
    lc = count_lemmas(timeline, ec)
    stats = {
        "user_id": timeline.user_id,
        "source": timeline.source_label,
        "n_documents": len(timeline.documents),
        "total_tokens": lc.total_tokens,
        "total_word_tokens": lc.total_word_tokens,
        "removed": {k: lc.removed_tallies.get(k, 0) for k in REMOVED_KINDS},
        "verbosity": verbosity(timeline, ec),
        "lexical_richness": lexical_richness(timeline, ec),
    }
    return lc, stats


def stage_extract(out_dir: Path, cfg: PipelineConfig) -> dict:
    """Extract lemma counts and per-user text statistics from timelines."""
    path = _require(out_dir, "timelines.jsonl", "ingest")
    try:
        timelines = read_timelines(path).timelines
    except EmptyCorpusError:
        raise EmptyCorpusError("empty corpus: no users survived ingest") from None
    ec = cfg.extraction_config()
    results = _parallel_map(_extract_worker, [(t, ec) for t in timelines], cfg.jobs)
    counts = [lc for lc, _ in results]
    write_counts_csv(out_dir / "counts.csv", counts)
    _write_jsonl(out_dir / "extract_stats.jsonl", [st for _, st in results])
    removed_totals = {k: 0 for k in REMOVED_KINDS}
    for lc in counts:
        for k in REMOVED_KINDS:
            removed_totals[k] += lc.removed_tallies.get(k, 0)
    stats = {
        "users": len(counts),
        "documents": sum(len(t.documents) for t in timelines),
        "total_tokens": sum(lc.total_tokens for lc in counts),
        "total_word_tokens": sum(lc.total_word_tokens for lc in counts),
        "kept_occurrences": sum(sum(lc.counts.values()) for lc in counts),
        "removed": removed_totals,
        "lemma_rows": sum(len(lc.counts) for lc in counts),
    }
    _record_stage(out_dir, cfg, "extract", stats)
    return stats


def stage_freq(out_dir: Path, cfg: PipelineConfig) -> dict:
    """Turn counts into per-year frequencies with their log10 values."""
    path = _require(out_dir, "counts.csv", "extract")
    counts = read_counts_csv(path)
    rows = []
    for lc in counts:
        table = word_frequencies(lc, cfg.window_years)
        for lemma in sorted(table.freqs):
            rows.append(
                (
                    lc.user_id,
                    lemma,
                    table.freqs[lemma],
                    table.log_freqs[lemma],
                    table.window_years,
                )
            )
    _write_csv(
        out_dir / "frequencies.csv",
        ["user_id", "lemma", "frequency", "log10_frequency", "window_years"],
        rows,
    )
    stats = {"users": len(counts), "lemma_rows": len(rows)}
    _record_stage(out_dir, cfg, "freq", stats)
    return stats


def _cluster_worker(args):
    table, mc = args
    try:
        return cluster_user(table, mc)
    except DegenerateInputError:
        return None


def stage_cluster(out_dir: Path, cfg: PipelineConfig) -> dict:
    """Run Mean Shift per user over log frequencies."""
    path = _require(out_dir, "frequencies.csv", "freq")
    tables = _read_frequency_tables(path)
    mc = cfg.meanshift_config()
    models = _parallel_map(_cluster_worker, [(t, mc) for t in tables], cfg.jobs)
    cluster_rows = []
    assign_rows = []
    fitted = 0
    max_iter_used = 0
    for table, model in zip(tables, models):
        if model is None:
            continue
        fitted += 1
        max_iter_used = max(max_iter_used, model.iterations_used)
        sizes = model.cluster_sizes()
        for rank, mode in enumerate(model.modes):
            cluster_rows.append((table.user_id, model.bandwidth, rank, mode, sizes[rank]))
        for lemma in sorted(model.assignments):
            assign_rows.append((table.user_id, lemma, model.assignments[lemma]))
    _write_csv(
        out_dir / "clusters.csv",
        ["user_id", "bandwidth", "mode_rank", "mode_value", "member_count"],
        cluster_rows,
    )
    _write_csv(
        out_dir / "assignments.csv",
        ["user_id", "lemma", "cluster_rank"],
        assign_rows,
    )
    stats = {
        "users": len(tables),
        "users_clustered": fitted,
        "users_skipped_degenerate": len(tables) - fitted,
        "max_iterations_used": max_iter_used,
    }
    _record_stage(out_dir, cfg, "cluster", stats)
    return stats


def _read_cluster_sizes(path: Path) -> dict[str, list[int]]:
    per_user: dict[str, dict[int, int]] = {}
    for row in _read_csv(path):
        per_user.setdefault(row["user_id"], {})[int(row["mode_rank"])] = int(
            row["member_count"]
        )
    return {
        user: [ranks[r] for r in sorted(ranks)] for user, ranks in sorted(per_user.items())
    }


def stage_layers(out_dir: Path, cfg: PipelineConfig) -> dict:
    """Cumulative layer sizes and scaling ratios per user."""
    path = _require(out_dir, "clusters.csv", "cluster")
    sizes_by_user = _read_cluster_sizes(path)
    rows = []
    for user, sizes in sizes_by_user.items():
        net = layers_from_sizes(user, sizes)
        for rank in range(1, net.n_layers + 1):
            ratio = net.scaling_ratios[rank - 2] if rank >= 2 else None
            rows.append(
                (
                    user,
                    rank,
                    net.cluster_sizes[rank - 1],
                    net.layer_sizes[rank - 1],
                    ratio,
                )
            )
    _write_csv(
        out_dir / "ego_layers.csv",
        ["user_id", "rank", "cluster_size", "layer_size", "ratio_to_inner"],
        rows,
    )
    stats = {"users": len(sizes_by_user), "layer_rows": len(rows)}
    _record_stage(out_dir, cfg, "layers", stats)
    return stats


def _user_seed(run_seed: int, user_id: str) -> int:
    # stable per-user bootstrap seed independent of the user set
    digest = hashlib.sha256(f"{run_seed}:{user_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _tailfit_worker(args):
    table, boot, run_seed, max_candidates = args
    values = table.values()
    try:
        fit = fit_powerlaw(values, max_candidates=max_candidates)
    except (InsufficientDataError, DegenerateInputError):
        return None
    seed = None
    if boot > 0:
        seed = _user_seed(run_seed, table.user_id)
        fit.p_value = bootstrap_pvalue(
            values, fit, n_boot=boot, seed=seed, max_candidates=max_candidates
        )
    return (
        table.user_id,
        fit.alpha,
        fit.xmin,
        fit.ks_distance,
        fit.n_tail,
        fit.p_value,
        boot if boot > 0 else None,
        seed,
        RNG_ID if boot > 0 else None,
    )


def stage_tailfit(out_dir: Path, cfg: PipelineConfig) -> dict:
    """Fit each user's frequency tail; optional bootstrap p-values."""
    path = _require(out_dir, "frequencies.csv", "freq")
    tables = _read_frequency_tables(path)
    results = _parallel_map(
        _tailfit_worker,
        [(t, cfg.boot, cfg.seed, cfg.max_candidates) for t in tables],
        cfg.jobs,
    )
    rows = [r for r in results if r is not None]
    _write_csv(
        out_dir / "tailfit.csv",
        ["user_id", "alpha", "xmin", "ks", "n_tail", "p_value", "n_boot", "seed", "rng"],
        rows,
    )
    stats = {
        "users": len(tables),
        "users_fit": len(rows),
        "users_skipped": len(tables) - len(rows),
        "n_boot": cfg.boot,
    }
    _record_stage(out_dir, cfg, "tailfit", stats)
    return stats


# ---------------------------------------------------------------------------
# report


def _report_ccdf(out_dir: Path) -> list[tuple]:
    path = _require(out_dir, "frequencies.csv", "freq")
    rows = []
    for table in _read_frequency_tables(path):
        if not table.freqs:
            continue
        for value, prob in ccdf(table.values()):
            rows.append((table.user_id, value, prob))
    return rows


def _report_user_stat(out_dir: Path, cfg: PipelineConfig, key: str) -> list[tuple]:
    path = _require(out_dir, "extract_stats.jsonl", "extract")
    values = [
        rec[key] for rec in _read_jsonl(path) if rec.get(key) is not None
    ]
    if len(values) < 2:
        return []
    mean, lo, hi = user_ci_aggregate(values)
    return [(cfg.label, cfg.window_years, len(values), mean, lo, hi)]


def _report_removed(out_dir: Path, cfg: PipelineConfig) -> list[tuple]:
    path = _require(out_dir, "extract_stats.jsonl", "extract")
    records = _read_jsonl(path)
    total_tokens = sum(rec.get("total_tokens") or 0 for rec in records)
    rows = []
    for kind in REMOVED_KINDS:
        removed = sum((rec.get("removed") or {}).get(kind, 0) for rec in records)
        percent = 100.0 * removed / total_tokens if total_tokens else None
        rows.append((cfg.label, kind, removed, percent))
    return rows


def _cohort_networks(out_dir: Path) -> tuple[list[EgoNetworkOfWords], dict[int, int], int]:
    path = _require(out_dir, "ego_layers.csv", "layers")
    sizes_by_user: dict[str, dict[int, int]] = {}
    for row in _read_csv(path):
        sizes_by_user.setdefault(row["user_id"], {})[int(row["rank"])] = int(
            row["cluster_size"]
        )
    networks = [
        layers_from_sizes(user, [ranks[r] for r in sorted(ranks)])
        for user, ranks in sorted(sizes_by_user.items())
    ]
    if not networks:
        return [], {}, 0
    hist: dict[int, int] = {}
    for net in networks:
        hist[net.n_layers] = hist.get(net.n_layers, 0) + 1
    modal = sorted(hist.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]
    cohort = [net for net in networks if net.n_layers == modal]
    return cohort, dict(sorted(hist.items())), modal


def _report_tail_rejections(out_dir: Path, cfg: PipelineConfig) -> list[tuple]:
    path = _require(out_dir, "tailfit.csv", "tailfit")
    pvals = [float(row["p_value"]) for row in _read_csv(path) if row["p_value"]]
    if not pvals:
        return []
    fractions = rejection_table(pvals)
    return [
        (cfg.label, threshold, fractions[threshold], len(pvals))
        for threshold in (0.1, 0.05, 0.01)
    ]


def _report_dataset_summary(out_dir: Path, cfg: PipelineConfig) -> list[tuple]:
    timelines_path = out_dir / "timelines.jsonl"
    if timelines_path.exists():
        summary = dataset_summary(read_timelines(timelines_path).timelines, cfg.window_years)
        return [
            (label, cfg.window_years, src.users, src.avg_docs)
            for label, src in sorted(summary.by_source.items())
        ]
    counts_path = _require(out_dir, "counts.csv", "extract")
    users = {row["user_id"] for row in _read_csv(counts_path)}
    return [(cfg.label, cfg.window_years, len(users), None)]


def emit_figure_data(out_dir: Path, cfg: PipelineConfig) -> dict:
    """Write the ten figure/table data files from pipeline artifacts."""
    out_dir = Path(out_dir)
    notes: dict[str, str] = {}

    _write_csv(
        out_dir / "ccdf.csv",
        ["user_id", "frequency", "probability"],
        _report_ccdf(out_dir),
    )
    agg_header = ["label", "window_years", "n_users", "mean", "ci_low", "ci_high"]
    _write_csv(out_dir / "verbosity.csv", agg_header, _report_user_stat(out_dir, cfg, "verbosity"))
    _write_csv(
        out_dir / "richness.csv", agg_header, _report_user_stat(out_dir, cfg, "lexical_richness")
    )
    _write_csv(
        out_dir / "removed_tokens.csv",
        ["label", "kind", "tokens_removed", "percent"],
        _report_removed(out_dir, cfg),
    )
    _write_csv(
        out_dir / "dataset_summary.csv",
        ["label", "window_years", "n_users", "avg_documents"],
        _report_dataset_summary(out_dir, cfg),
    )

    cohort, hist, modal = _cohort_networks(out_dir)
    _write_csv(
        out_dir / "cluster_hist.csv",
        ["cluster_count", "n_users", "is_modal"],
        [(k, n, k == modal) for k, n in hist.items()],
    )

    layer_rows = []
    ratio_rows = []
    regression_rows = []
    if len(cohort) >= 2:
        size_aggs, ratio_aggs = cohort_layer_summary(cohort)
        layer_rows = [
            (cfg.label, cfg.window_years, modal, a.rank, a.mean, a.ci_low, a.ci_high, a.n_users)
            for a in size_aggs
        ]
        ratio_rows = [
            (cfg.label, cfg.window_years, modal, a.rank, a.mean, a.ci_low, a.ci_high, a.n_users)
            for a in ratio_aggs
        ]
        try:
            regression_rows = [
                (
                    cfg.label,
                    cfg.window_years,
                    modal,
                    r.layer_rank,
                    r.slope,
                    r.intercept,
                    r.r_squared,
                    r.n_users,
                )
                for r in layer_size_regression(cohort, cfg.regression_through_origin)
            ]
        except DegenerateInputError as exc:
            notes["regression"] = str(exc)
    elif cohort:
        notes["cohort"] = "modal cohort has a single user; aggregates skipped"
    agg = ["label", "window_years", "k", "rank"]
    _write_csv(out_dir / "layers.csv", agg + ["mean_size", "ci_low", "ci_high", "n_users"], layer_rows)
    _write_csv(out_dir / "ratios.csv", agg + ["mean_ratio", "ci_low", "ci_high", "n_users"], ratio_rows)
    _write_csv(
        out_dir / "regression.csv",
        agg + ["slope", "intercept", "r_squared", "n_users"],
        regression_rows,
    )

    _write_csv(
        out_dir / "tailfit_rejections.csv",
        ["label", "threshold", "fraction_rejected", "n_users"],
        _report_tail_rejections(out_dir, cfg),
    )

    stats: dict = {"files": len(REPORT_FILES)}
    if notes:
        stats["notes"] = notes
    return stats


def stage_report(out_dir: Path, cfg: PipelineConfig) -> dict:
    stats = emit_figure_data(out_dir, cfg)
    _record_stage(out_dir, cfg, "report", stats)
    return stats


# ---------------------------------------------------------------------------
# full run


def reconcile_manifest(manifest: dict) -> list[str]:
    """Cross-check per-stage counts; returns human-readable inconsistencies."""
    problems = []
    stages = {
        name: entry.get("stats", entry)
        for name, entry in manifest.get("stages", {}).items()
    }
    ing = stages.get("ingest")
    if ing:
        if (
            ing["documents_parsed"]
            != ing["documents_after_filter"] + ing["removed_retweet"] + ing["removed_language"]
        ):
            problems.append("ingest: document filter tallies do not add up")
        if ing["users_parsed"] != ing["users_empty_after_filter"] + sum(
            ing["statuses"].values()
        ):
            problems.append("ingest: classified user tallies do not add up")
        if (
            ing["statuses"]["active"]
            != ing["users_kept"] + ing["users_window_too_short"] + ing["users_empty_window"]
        ):
            problems.append("ingest: window tallies do not add up")
    ext = stages.get("extract")
    if ext:
        accounted = (
            ext["kept_occurrences"]
            + ext["removed"]["stopword"]
            + ext["removed"]["hapax"]
        )
        if accounted != ext["total_word_tokens"]:
            problems.append("extract: word-token tallies do not add up")
    freq = stages.get("freq")
    if ext and freq and freq["lemma_rows"] != ext["lemma_rows"]:
        problems.append("freq: lemma row count does not match extract output")
    clu = stages.get("cluster")
    if clu and clu["users"] != clu["users_clustered"] + clu["users_skipped_degenerate"]:
        problems.append("cluster: user tallies do not add up")
    tail = stages.get("tailfit")
    if tail and tail["users"] != tail["users_fit"] + tail["users_skipped"]:
        problems.append("tailfit: user tallies do not add up")
    return problems


def run_pipeline(input_path, out_dir, cfg: PipelineConfig | None = None) -> Path:
    """Execute every stage in order; returns the output directory."""
    cfg = cfg or PipelineConfig()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.input_format == "timelines":
        plan = [("ingest", lambda: stage_ingest(input_path, out_dir, cfg))]
        plan.append(("extract", lambda: stage_extract(out_dir, cfg)))
    elif cfg.input_format == "counts":
        plan = [("ingest-counts", lambda: stage_seed_counts(input_path, out_dir, cfg))]
    else:
        raise ConfigurationError(f"unknown input format: {cfg.input_format!r}")
    plan += [
        ("freq", lambda: stage_freq(out_dir, cfg)),
        ("cluster", lambda: stage_cluster(out_dir, cfg)),
        ("layers", lambda: stage_layers(out_dir, cfg)),
        ("tailfit", lambda: stage_tailfit(out_dir, cfg)),
        ("report", lambda: stage_report(out_dir, cfg)),
    ]
    for name, step in plan:
        try:
            step()
        except StageError:
            raise
        except (EgowordsError, ValueError, OSError) as exc:
            raise StageError(name, exc) from exc
    manifest = _load_manifest(out_dir)
    problems = reconcile_manifest(manifest)
    if problems:
        raise StageError("manifest", RuntimeError("; ".join(problems)))
    manifest["outputs"] = sorted(
        p.name for p in out_dir.iterdir() if p.is_file() and p.name != "manifest.json"
    )
    _save_manifest(out_dir, manifest)
    return out_dir


# ---------------------------------------------------------------------------
# simulation writers


def write_planted_corpus(
    out_dir: Path,
    users: int,
    k: int,
    separation: float = 1.0,
    jitter_sd: float = 0.08,
    words_base: int = 6,
    words_base_spread: int = 5,
    window_years: float = 1.0,
    seed: int = 0,
) -> dict:
    """Planted-mode corpus: counts.csv plus a truth.csv sidecar.

    Vocabulary sizes vary across users (words_base cycled over the spread)
    so cohort regressions have a non-degenerate predictor.
    """
    from .synth import generate_planted_user, planted_spec_for_k

    if users < 1:
        raise ValueError("users must be positive")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    user_seeds = np.random.SeedSequence(seed).generate_state(users, np.uint64)
    all_counts = []
    truth_rows = []
    for i in range(users):
        base = words_base + (i % words_base_spread if words_base_spread > 0 else 0)
        spec = planted_spec_for_k(
            k,
            separation=separation,
            jitter_sd=jitter_sd,
            words_base=base,
            window_years=window_years,
            seed=int(user_seeds[i]),
        )
        user_id = f"planted-{i:04d}"
        table, truth = generate_planted_user(spec, user_id)
        counts = {
            lemma: int(round(f * window_years)) for lemma, f in table.freqs.items()
        }
        all_counts.append(
            LemmaCounts(
                user_id=user_id,
                counts=dict(sorted(counts.items())),
                total_word_tokens=sum(counts.values()),
                removed_tallies={kind: 0 for kind in REMOVED_KINDS},
                total_tokens=sum(counts.values()),
            )
        )
        for lemma in sorted(truth):
            truth_rows.append((user_id, lemma, truth[lemma]))
    write_counts_csv(out_dir / "counts.csv", all_counts)
    _write_csv(out_dir / "truth.csv", ["user_id", "lemma", "true_mode_index"], truth_rows)
    stats = {
        "kind": "planted",
        "users": users,
        "k": k,
        "separation": separation,
        "jitter_sd": jitter_sd,
        "words_base": words_base,
        "words_base_spread": words_base_spread,
        "window_years": window_years,
        "seed": seed,
    }
    manifest = _load_manifest(out_dir)
    manifest["stages"]["simulate"] = {"config": stats, "stats": stats}
    _save_manifest(out_dir, manifest)
    return stats


def write_zipf_corpus(
    out_dir: Path,
    users: int,
    vocab_size: int,
    exponent: float,
    total_tokens: int,
    window_years: float = 1.0,
    seed: int = 0,
) -> dict:
    from .synth import generate_zipf_user

    if users < 1:
        raise ValueError("users must be positive")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    all_counts = []
    for i in range(users):
        user_id = f"zipf-{i:04d}"
        table = generate_zipf_user(
            vocab_size, exponent, total_tokens, window_years, seed, user_id
        )
        counts = {
            lemma: int(round(f * window_years)) for lemma, f in table.freqs.items()
        }
        all_counts.append(
            LemmaCounts(
                user_id=user_id,
                counts=dict(sorted(counts.items())),
                total_word_tokens=sum(counts.values()),
                removed_tallies={kind: 0 for kind in REMOVED_KINDS},
                total_tokens=sum(counts.values()),
            )
        )
    write_counts_csv(out_dir / "counts.csv", all_counts)
    stats = {
        "kind": "zipf",
        "users": users,
        "vocab_size": vocab_size,
        "exponent": exponent,
        "total_tokens": total_tokens,
        "window_years": window_years,
        "seed": seed,
    }
    manifest = _load_manifest(out_dir)
    manifest["stages"]["simulate"] = {"config": stats, "stats": stats}
    _save_manifest(out_dir, manifest)
    return stats


def write_pareto_samples(
    out_dir: Path, alpha: float, xmin: float, n: int, seed: int = 0
) -> dict:
    from .synth import generate_power_law_samples

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    values = generate_power_law_samples(alpha, xmin, n, seed)
    _write_csv(out_dir / "samples.csv", ["value"], [(float(v),) for v in values])
    stats = {"kind": "pareto", "alpha": alpha, "xmin": xmin, "n": n, "seed": seed}
    manifest = _load_manifest(out_dir)
    manifest["stages"]["simulate"] = {"config": stats, "stats": stats}
    _save_manifest(out_dir, manifest)
    return stats
