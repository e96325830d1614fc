"""End-to-end pipeline behavior and the command-line front end."""

import hashlib
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import egowords
from egowords.cli import main
from egowords.errors import ConfigurationError, InputError
from egowords.extraction import LemmaCounts
from egowords.pipeline import (
    REMOVED_KINDS,
    REPORT_FILES,
    PipelineConfig,
    build_config,
    parse_config_file,
    read_counts_csv,
    reconcile_manifest,
    run_pipeline,
    write_counts_csv,
    write_planted_corpus,
)

DOWNLOAD = 1_700_000_000
SENTENCES = [
    "The garden beetle visits the garden every sunny morning",
    "Sunny mornings bring the beetle back to the garden gate",
    "A quiet gate and a quiet garden keep the beetle happy",
]


def _timeline_records(user_id: str, months: int = 14, source: str = "demo") -> list[dict]:
    first = {
        "user_id": user_id,
        "timestamp": DOWNLOAD - int(2 * 365.25 * 86400),
        "text": "hello garden hello beetle",
        "is_first_post": True,
        "download_time": DOWNLOAD,
        "source": source,
    }
    recs = [first]
    for m in range(months):
        recs.append(
            {
                "user_id": user_id,
                "timestamp": DOWNLOAD - m * 30 * 86400 - 3600,
                "text": SENTENCES[m % len(SENTENCES)],
                "download_time": DOWNLOAD,
                "source": source,
            }
        )
    return recs


def _write_timelines(path: Path, users: int = 3) -> Path:
    lines = []
    for i in range(users):
        lines += [json.dumps(r) for r in _timeline_records(f"user-{i}")]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _tree_digests(out_dir: Path) -> dict[str, str]:
    return {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(out_dir.iterdir())
        if p.is_file()
    }


@pytest.fixture(scope="module")
def planted_input(tmp_path_factory) -> Path:
    d = tmp_path_factory.mktemp("planted")
    write_planted_corpus(d, users=6, k=4, seed=7)
    return d / "counts.csv"


# ---------------------------------------------------------------------------
# counts round-trip


def test_counts_csv_round_trip(tmp_path):
    counts = [
        LemmaCounts(
            user_id="u2",
            counts={"b": 3, "a": 10},
            total_word_tokens=13,
            removed_tallies={k: 0 for k in REMOVED_KINDS},
            total_tokens=13,
        ),
        LemmaCounts(
            user_id="u1",
            counts={"z": 2},
            total_word_tokens=2,
            removed_tallies={k: 0 for k in REMOVED_KINDS},
            total_tokens=2,
        ),
    ]
    path = tmp_path / "counts.csv"
    write_counts_csv(path, counts)
    back = read_counts_csv(path)
    assert [lc.user_id for lc in back] == ["u1", "u2"]
    assert back[1].counts == {"a": 10, "b": 3}
    assert back[0].total_word_tokens == 2


def test_counts_csv_rejects_bad_rows(tmp_path):
    path = tmp_path / "counts.csv"
    path.write_text("user_id,lemma,count\nu1,word,many\n", encoding="utf-8")
    with pytest.raises(InputError):
        read_counts_csv(path)


# ---------------------------------------------------------------------------
# configuration


def test_parse_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# pipeline knobs\n"
        "window_years = 2.0\n"
        "boot=150  # bootstrap replicates\n"
        "\n"
        "label = demo\n",
        encoding="utf-8",
    )
    assert parse_config_file(cfg) == {
        "window_years": "2.0",
        "boot": "150",
        "label": "demo",
    }


def test_parse_config_file_requires_assignments(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("window_years\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        parse_config_file(cfg)


def test_build_config_coerces_types():
    cfg = build_config(
        {
            "window_years": "2.5",
            "api_cap": "4000",
            "regression_through_origin": "on",
            "reference_time": "none",
        }
    )
    assert cfg.window_years == 2.5
    assert cfg.api_cap == 4000
    assert cfg.regression_through_origin is True
    assert cfg.reference_time is None


def test_build_config_rejects_unknown_keys():
    with pytest.raises(ConfigurationError):
        build_config({"bandwidth": "1.0"})


def test_build_config_rejects_bad_values():
    with pytest.raises(ConfigurationError):
        build_config({"api_cap": "lots"})
    with pytest.raises(ConfigurationError):
        build_config({"regression_through_origin": "sideways"})


def test_build_config_overrides_beat_file_values():
    cfg = build_config({"boot": "150", "label": "filecorp"}, {"boot": 110, "seed": None})
    assert cfg.boot == 110
    assert cfg.label == "filecorp"
    assert cfg.seed == PipelineConfig().seed  # None overrides are "not given"


# ---------------------------------------------------------------------------
# simulate subcommands


def test_simulate_planted_cli(tmp_path, capsys):
    out = tmp_path / "sim"
    ret = main(
        ["simulate", "planted", "--out-dir", str(out), "--users", "4", "--k", "3", "--seed", "2"]
    )
    assert ret == 0
    assert "planted" in capsys.readouterr().out
    assert (out / "counts.csv").exists()
    truth = (out / "truth.csv").read_text(encoding="utf-8").splitlines()
    assert truth[0] == "user_id,lemma,true_mode_index"
    users = {line.split(",")[0] for line in truth[1:]}
    assert len(users) == 4
    ranks = {int(line.split(",")[2]) for line in truth[1:]}
    assert ranks == {0, 1, 2}


def test_simulate_zipf_cli(tmp_path):
    out = tmp_path / "zipf"
    ret = main(
        [
            "simulate", "zipf", "--out-dir", str(out),
            "--vocab", "3", "--exponent", "1.0", "--tokens", "11",
        ]
    )
    assert ret == 0
    counts = read_counts_csv(out / "counts.csv")
    assert len(counts) == 1
    assert sorted(counts[0].counts.values(), reverse=True) == [6, 3, 2]


def test_simulate_pareto_cli(tmp_path):
    out = tmp_path / "pareto"
    ret = main(
        ["simulate", "pareto", "--out-dir", str(out), "--alpha", "2.0", "--n", "50", "--seed", "4"]
    )
    assert ret == 0
    lines = (out / "samples.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "value"
    assert len(lines) == 51
    assert all(float(v) >= 1.0 for v in lines[1:])


# ---------------------------------------------------------------------------
# full runs


def test_run_counts_mode_emits_everything(planted_input, tmp_path, capsys):
    out = tmp_path / "run"
    ret = main(
        [
            "run", "--input", str(planted_input), "--from", "counts",
            "--out-dir", str(out), "--seed", "3",
        ]
    )
    assert ret == 0
    assert "run: complete" in capsys.readouterr().out
    for name in ("counts.csv", "frequencies.csv", "clusters.csv", "ego_layers.csv", "tailfit.csv"):
        assert (out / name).exists(), name
    for name in REPORT_FILES:
        assert (out / name).exists(), name
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert reconcile_manifest(manifest) == []
    assert manifest["outputs"] == sorted(
        p.name for p in out.iterdir() if p.is_file() and p.name != "manifest.json"
    )
    # every stage entry carries the config it actually ran with
    for entry in manifest["stages"].values():
        assert set(entry) == {"config", "stats"}
    assert manifest["stages"]["tailfit"]["config"]["seed"] == 3


def test_rerun_is_byte_identical(planted_input, tmp_path):
    cfg = PipelineConfig(input_format="counts", seed=5, boot=100)
    a = run_pipeline(planted_input, tmp_path / "a", cfg)
    b = run_pipeline(planted_input, tmp_path / "b", cfg)
    assert _tree_digests(a) == _tree_digests(b)


def test_jobs_do_not_change_data_files(planted_input, tmp_path):
    serial = run_pipeline(planted_input, tmp_path / "s", PipelineConfig(input_format="counts"))
    parallel = run_pipeline(
        planted_input, tmp_path / "p", PipelineConfig(input_format="counts", jobs=2)
    )
    ds = _tree_digests(serial)
    dp = _tree_digests(parallel)
    ds.pop("manifest.json")  # records the jobs setting
    dp.pop("manifest.json")
    assert ds == dp


def test_timelines_end_to_end(tmp_path, capsys):
    src = _write_timelines(tmp_path / "timelines.jsonl")
    out = tmp_path / "run"
    ret = main(["run", "--input", str(src), "--out-dir", str(out), "--boot", "100"])
    assert ret == 0
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    ing = manifest["stages"]["ingest"]["stats"]
    assert ing["users_kept"] == 3
    assert reconcile_manifest(manifest) == []
    stats = [
        json.loads(line)
        for line in (out / "extract_stats.jsonl").read_text(encoding="utf-8").splitlines()
    ]
    for st in stats:
        assert st["lexical_richness"] <= st["verbosity"]
    summary = (out / "dataset_summary.csv").read_text(encoding="utf-8").splitlines()
    assert any("demo" in line for line in summary[1:])


def test_stagewise_chain_matches_run(tmp_path):
    src = _write_timelines(tmp_path / "timelines.jsonl")
    whole = tmp_path / "whole"
    assert main(["run", "--input", str(src), "--out-dir", str(whole)]) == 0
    staged = tmp_path / "staged"
    chain = [
        ["ingest", "--input", str(src), "--out-dir", str(staged)],
        ["extract", "--out-dir", str(staged)],
        ["freq", "--out-dir", str(staged)],
        ["cluster", "--out-dir", str(staged)],
        ["layers", "--out-dir", str(staged)],
        ["fit-tail", "--out-dir", str(staged), "--boot", "100"],
        ["report", "--out-dir", str(staged)],
    ]
    for argv in chain:
        assert main(argv) == 0, argv
    dw = _tree_digests(whole)
    ds = _tree_digests(staged)
    dw.pop("manifest.json")  # whole-run manifests also carry the outputs index
    ds.pop("manifest.json")
    assert dw == ds


def test_config_file_feeds_run(planted_input, tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("boot = 150\nlabel = filecorp\n", encoding="utf-8")
    out = tmp_path / "run"
    ret = main(
        [
            "run", "--input", str(planted_input), "--from", "counts",
            "--out-dir", str(out), "--config", str(cfg_file), "--boot", "110",
        ]
    )
    assert ret == 0
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    tail_cfg = manifest["stages"]["tailfit"]["config"]
    assert tail_cfg["boot"] == 110  # flag beats file
    assert tail_cfg["label"] == "filecorp"


# ---------------------------------------------------------------------------
# failure modes


def test_missing_stage_dependency(tmp_path, capsys):
    out = tmp_path / "sim"
    assert main(["simulate", "planted", "--out-dir", str(out), "--users", "2", "--k", "3"]) == 0
    ret = main(["cluster", "--out-dir", str(out)])
    assert ret == 2
    err = capsys.readouterr().err
    assert err.startswith("error [cluster]")
    assert "freq" in err


def test_missing_input_file(tmp_path, capsys):
    ret = main(
        [
            "run", "--input", str(tmp_path / "nowhere.csv"), "--from", "counts",
            "--out-dir", str(tmp_path / "out"),
        ]
    )
    assert ret == 2
    assert capsys.readouterr().err.startswith("error [ingest-counts]")


def test_empty_corpus_is_diagnosed(tmp_path, capsys):
    # accounts younger than the observation window: ingest keeps nobody
    recs = []
    for i in range(2):
        recs.append(
            {
                "user_id": f"young-{i}",
                "timestamp": DOWNLOAD - 40 * 86400,
                "text": "hello garden hello beetle",
                "is_first_post": True,
                "download_time": DOWNLOAD,
            }
        )
        recs.append(
            {
                "user_id": f"young-{i}",
                "timestamp": DOWNLOAD - 86400,
                "text": "the beetle came back to the garden",
                "download_time": DOWNLOAD,
            }
        )
    src = tmp_path / "timelines.jsonl"
    src.write_text("\n".join(json.dumps(r) for r in recs) + "\n", encoding="utf-8")
    ret = main(["run", "--input", str(src), "--out-dir", str(tmp_path / "out")])
    assert ret == 2
    err = capsys.readouterr().err
    assert err.startswith("error [")
    assert "empty corpus" in err


def test_reconcile_detects_tampered_counts(planted_input, tmp_path):
    out = run_pipeline(planted_input, tmp_path / "run", PipelineConfig(input_format="counts"))
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert reconcile_manifest(manifest) == []
    manifest["stages"]["cluster"]["stats"]["users_clustered"] += 1
    problems = reconcile_manifest(manifest)
    assert problems and "cluster" in problems[0]


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_help_exits_zero():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0


# ---------------------------------------------------------------------------
# kernel backend selection


def test_backend_is_reported():
    assert egowords.kernel_backend() in {"pure", "compiled"}


def test_pure_backend_env_override():
    code = (
        "import egowords, sys;"
        "sys.exit(0 if egowords.kernel_backend() == 'pure' else 1)"
    )
    proc = subprocess.run(
        [sys.executable, "-c", code],
        env={**os.environ, "EGOWORDS_PURE": "1"},
        check=False,
    )
    assert proc.returncode == 0
