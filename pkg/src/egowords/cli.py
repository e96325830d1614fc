"""Command-line entry points: stage subcommands plus the full pipeline.

Every stage is individually invocable against a shared output directory, so
partial reruns are possible; `run` chains them all. Flags can also come from
a key=value config file (--config), with explicit flags taking precedence.
Errors exit nonzero with a stage-tagged diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields as dataclass_fields
from pathlib import Path

from .errors import EgowordsError, StageError
from .pipeline import (
    PipelineConfig,
    build_config,
    parse_config_file,
    run_pipeline,
    stage_cluster,
    stage_extract,
    stage_freq,
    stage_ingest,
    stage_layers,
    stage_report,
    stage_tailfit,
    write_pareto_samples,
    write_planted_corpus,
    write_zipf_corpus,
)

_CONFIG_KEYS = {f.name for f in dataclass_fields(PipelineConfig)}


def _add_common(parser: argparse.ArgumentParser, out_dir_required: bool = True) -> None:
    parser.add_argument("--out-dir", required=out_dir_required, help="run directory shared by all stages")
    parser.add_argument("--config", help="key=value file supplying flag defaults")
    parser.add_argument("--jobs", dest="jobs", type=int, default=None, help="per-user worker processes")
    parser.add_argument("--seed", dest="seed", type=int, default=None, help="run seed for bootstrap streams")
    parser.add_argument("--label", dest="label", default=None, help="dataset label used in report files")


def _add_ingest_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lang", dest="language", default=None, help="kept language (primary subtag match)")
    parser.add_argument("--window-years", dest="window_years", type=float, default=None)
    parser.add_argument("--abandon-months", dest="abandon_months", type=float, default=None)
    parser.add_argument("--sporadic-frac", dest="sporadic_fraction", type=float, default=None)
    parser.add_argument("--api-cap", dest="api_cap", type=int, default=None)
    parser.add_argument("--reference-time", dest="reference_time", type=int, default=None)


def _add_extract_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stopwords", dest="stopwords", default=None, help='"builtin" or a word-list file')
    parser.add_argument("--lemmatizer", dest="lemmatizer", default=None)
    parser.add_argument("--min-count", dest="min_count", type=int, default=None)


def _add_cluster_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--quantile", dest="quantile", type=float, default=None)
    parser.add_argument("--tol", dest="tolerance", type=float, default=None)
    parser.add_argument("--max-iter", dest="max_iterations", type=int, default=None)


def _add_tail_flags(parser: argparse.ArgumentParser, boot_default=None) -> None:
    parser.add_argument("--boot", dest="boot", type=int, default=boot_default,
                        help="bootstrap replicates per user (0 disables p-values)")
    parser.add_argument("--max-candidates", dest="max_candidates", type=int, default=None)


def _add_report_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--regression",
        dest="regression",
        choices=("intercept", "through-origin"),
        default=None,
        help="layer-size regression variant",
    )


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    file_values = parse_config_file(args.config) if getattr(args, "config", None) else None
    overrides = {}
    for key in _CONFIG_KEYS:
        if hasattr(args, key):
            overrides[key] = getattr(args, key)
    if getattr(args, "regression", None) is not None:
        overrides["regression_through_origin"] = args.regression == "through-origin"
    if getattr(args, "input_format", None) is not None:
        overrides["input_format"] = args.input_format
    return build_config(file_values, overrides)


def _cmd_ingest(args) -> int:
    cfg = _config_from_args(args)
    stats = stage_ingest(args.input, Path(args.out_dir), cfg)
    print(f"ingest: kept {stats['users_kept']} of {stats['users_parsed']} users")
    return 0


def _cmd_stage(stage_fn, summary):
    def run(args) -> int:
        cfg = _config_from_args(args)
        stats = stage_fn(Path(args.out_dir), cfg)
        print(summary.format(**stats))
        return 0

    return run


def _cmd_run(args) -> int:
    cfg = _config_from_args(args)
    out_dir = run_pipeline(args.input, Path(args.out_dir), cfg)
    print(f"run: complete, outputs in {out_dir}")
    return 0


def _cmd_simulate(args) -> int:
    out_dir = Path(args.out_dir)
    if args.kind == "planted":
        stats = write_planted_corpus(
            out_dir,
            users=args.users,
            k=args.k,
            separation=args.separation,
            jitter_sd=args.jitter,
            words_base=args.words_base,
            words_base_spread=args.words_base_spread,
            window_years=args.window_years,
            seed=args.seed if args.seed is not None else 0,
        )
    elif args.kind == "zipf":
        stats = write_zipf_corpus(
            out_dir,
            users=args.users,
            vocab_size=args.vocab,
            exponent=args.exponent,
            total_tokens=args.tokens,
            window_years=args.window_years,
            seed=args.seed if args.seed is not None else 0,
        )
    else:
        stats = write_pareto_samples(
            out_dir,
            alpha=args.alpha,
            xmin=args.xmin,
            n=args.n,
            seed=args.seed if args.seed is not None else 0,
        )
    print(f"simulate: wrote {stats['kind']} data to {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egowords",
        description="Reconstruct per-author word-frequency layer structures from timelines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse, filter, classify, and window-trim timelines")
    p.add_argument("--input", required=True, help="line-delimited timeline records")
    _add_common(p)
    _add_ingest_flags(p)
    p.set_defaults(handler=_cmd_ingest, stage_name="ingest")

    p = sub.add_parser("extract", help="tokenize and count lemmas per user")
    _add_common(p)
    _add_extract_flags(p)
    p.set_defaults(
        handler=_cmd_stage(stage_extract, "extract: {users} users, {lemma_rows} lemmas"),
        stage_name="extract",
    )

    p = sub.add_parser("freq", help="counts to per-year frequencies")
    _add_common(p)
    p.add_argument("--window-years", dest="window_years", type=float, default=None)
    p.set_defaults(
        handler=_cmd_stage(stage_freq, "freq: {users} users, {lemma_rows} lemmas"),
        stage_name="freq",
    )

    p = sub.add_parser("cluster", help="Mean Shift over log frequencies")
    _add_common(p)
    _add_cluster_flags(p)
    p.set_defaults(
        handler=_cmd_stage(stage_cluster, "cluster: {users_clustered} of {users} users clustered"),
        stage_name="cluster",
    )

    p = sub.add_parser("layers", help="cumulative layers and scaling ratios")
    _add_common(p)
    p.set_defaults(
        handler=_cmd_stage(stage_layers, "layers: {users} users, {layer_rows} rows"),
        stage_name="layers",
    )

    p = sub.add_parser("fit-tail", help="power-law tail fits with bootstrap p-values")
    _add_common(p)
    _add_tail_flags(p, boot_default=1000)
    p.set_defaults(
        handler=_cmd_stage(stage_tailfit, "fit-tail: {users_fit} of {users} users fit"),
        stage_name="tailfit",
    )

    p = sub.add_parser("report", help="emit the figure/table data files")
    _add_common(p)
    _add_report_flags(p)
    p.set_defaults(
        handler=_cmd_stage(stage_report, "report: {files} files written"),
        stage_name="report",
    )

    p = sub.add_parser("run", help="full pipeline: ingest through report")
    p.add_argument("--input", required=True)
    p.add_argument(
        "--from",
        dest="input_format",
        choices=("timelines", "counts"),
        default=None,
        help="input format; counts skips ingest/extract",
    )
    _add_common(p)
    _add_ingest_flags(p)
    _add_extract_flags(p)
    _add_cluster_flags(p)
    _add_tail_flags(p)
    _add_report_flags(p)
    p.set_defaults(handler=_cmd_run, stage_name=None)

    p = sub.add_parser("simulate", help="synthetic data with ground truth")
    sim = p.add_subparsers(dest="kind", required=True)

    sp = sim.add_parser("planted", help="users with planted log-frequency modes")
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--users", type=int, default=20)
    sp.add_argument("--k", type=int, default=6)
    sp.add_argument("--separation", type=float, default=1.0)
    sp.add_argument("--jitter", type=float, default=0.08)
    sp.add_argument("--words-base", type=int, default=6)
    sp.add_argument("--words-base-spread", type=int, default=5)
    sp.add_argument("--window-years", type=float, default=1.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(handler=_cmd_simulate, stage_name="simulate", kind="planted")

    sz = sim.add_parser("zipf", help="rank-power count profiles")
    sz.add_argument("--out-dir", required=True)
    sz.add_argument("--users", type=int, default=1)
    sz.add_argument("--vocab", type=int, default=1000)
    sz.add_argument("--exponent", type=float, default=1.0)
    sz.add_argument("--tokens", type=int, default=100000)
    sz.add_argument("--window-years", type=float, default=1.0)
    sz.add_argument("--seed", type=int, default=0)
    sz.set_defaults(handler=_cmd_simulate, stage_name="simulate", kind="zipf")

    sa = sim.add_parser("pareto", help="continuous power-law samples")
    sa.add_argument("--out-dir", required=True)
    sa.add_argument("--alpha", type=float, default=2.5)
    sa.add_argument("--xmin", type=float, default=1.0)
    sa.add_argument("--n", type=int, default=10000)
    sa.add_argument("--seed", type=int, default=0)
    sa.set_defaults(handler=_cmd_simulate, stage_name="simulate", kind="pareto")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except StageError as exc:
        print(f"error {exc}", file=sys.stderr)
        return 2
    except (EgowordsError, ValueError, OSError) as exc:
        stage = getattr(args, "stage_name", None)
        tag = f"[{stage}] " if stage else ""
        print(f"error {tag}{exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
