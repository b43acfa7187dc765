import json
from pathlib import Path

import pytest

from gavel.cli import main

FIXTURES = Path(__file__).parent.parent / "fixtures"


def run(argv):
    return main(argv)


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    out = capsys.readouterr().out
    assert "segment" in out and "verify-sample" in out


def test_no_subcommand_exits_one(capsys):
    assert run([]) == 1


def test_unknown_flag_exits_one_with_usage(capsys):
    assert run(["segment", "--nonsense"]) == 1
    err = capsys.readouterr().err
    assert "usage" in err.lower()


def test_unknown_subcommand_exits_one(capsys):
    assert run(["transmogrify"]) == 1


def test_segment_missing_input_exits_one(capsys):
    assert run(["segment", "--input", "/nonexistent/path", "--output", "/tmp/x"]) == 1
    err = capsys.readouterr().err
    assert "/nonexistent/path" in err


def test_classify_qa_missing_required_flag(capsys):
    assert run(["classify-qa", "train"]) == 1
    assert "--train" in capsys.readouterr().err


def test_config_file_provides_values(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"input": "/nonexistent/path", "output": str(tmp_path / "out")}))
    assert run(["segment", "--config", str(cfg)]) == 1
    assert "/nonexistent/path" in capsys.readouterr().err  # value came from the config file


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("[1,2,3]")
    assert run(["segment", "--config", str(cfg)]) == 1


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """Full fetch-free pipeline over the bundled fixture set."""
    root = tmp_path_factory.mktemp("pipeline")
    corpus = root / "corpus"
    steps = [
        ["segment", "--input", str(FIXTURES / "hearings"), "--output", str(corpus)],
        [
            "classify-qa", "train",
            "--train", f"{FIXTURES / 'qa' / 'ama_train.tsv'}:AMA",
            "--train", f"{FIXTURES / 'qa' / 'ukparl_train.tsv'}:UKParl",
            "--model-out", str(root / "qa_model.json"),
            "--epochs", "30",
        ],
        ["classify-qa", "apply", "--model", str(root / "qa_model.json"), "--corpus", str(corpus)],
        ["pair", "--corpus", str(corpus), "--output", str(root / "pairs.jsonl")],
        [
            "features", "--corpus", str(corpus), "--pairs", str(root / "pairs.jsonl"),
            "--government", str(FIXTURES / "government_context.json"),
            "--output", str(root / "examples.tsv"),
        ],
        [
            "kstest", "--examples", str(root / "examples.tsv"), "--kind", "Question",
            "--out-matrix", str(root / "ks_matrix.tsv"), "--out-details", str(root / "ks_details.tsv"),
        ],
        [
            "train", "--examples", str(root / "examples.tsv"), "--task", "Affiliation",
            "--kind", "Question", "--model", "forest", "--min-rows", "4",
            "--model-out", str(root / "party_model.json"),
            "--importance-out", str(root / "importances.tsv"),
        ],
        [
            "evaluate", "--examples", str(root / "examples.tsv"), "--task", "Affiliation",
            "--kind", "Question", "--min-rows", "10", "--out-dir", str(root / "eval"),
        ],
        [
            "prompts", "--corpus", str(corpus), "--pairs", str(root / "pairs.jsonl"),
            "--kind", "Both", "--output", str(root / "prompts.jsonl"),
        ],
        [
            "verify-sample", "--corpus", str(corpus), "--hearings-per-session", "1",
            "--utterances-per-hearing", "4", "--output", str(root / "sample.tsv"),
        ],
    ]
    for argv in steps:
        assert run(argv) == 0, f"step failed: {argv}"
    return root


def test_pipeline_artifacts_present(pipeline):
    expected = [
        "corpus/segmentation_report.json",
        "qa_model.json",
        "pairs.jsonl",
        "examples.tsv",
        "ks_matrix.tsv",
        "ks_details.tsv",
        "party_model.json",
        "importances.tsv",
        "eval/split_grid.tsv",
        "eval/skipped_splits.tsv",
        "eval/manifest.json",
        "prompts.jsonl",
        "sample.tsv",
    ]
    for rel in expected:
        assert (pipeline / rel).exists(), rel


def test_pipeline_corpus_store_layout(pipeline):
    hearing_dirs = [p for p in (pipeline / "corpus").iterdir() if p.is_dir()]
    assert hearing_dirs
    for hdir in hearing_dirs:
        assert (hdir / "meta.json").is_file()
        assert (hdir / "utterances.jsonl").is_file()
        assert (hdir / "roster.json").is_file()


def test_pipeline_manifest_hash_fields(pipeline):
    manifest = json.loads((pipeline / "eval" / "manifest.json").read_text())
    for field in ("subcommand", "config", "config_hash", "input_checksums", "seed", "version"):
        assert field in manifest
    assert manifest["subcommand"] == "evaluate"


def test_verify_sample_scoring_round_trip(pipeline, tmp_path, capsys):
    sample = (pipeline / "sample.tsv").read_text().splitlines()
    verdicts = tmp_path / "verdicts.tsv"
    rows = []
    for i, line in enumerate(sample[1:]):
        utterance_id = line.split("\t")[0]
        verdict = "correct" if i % 7 else "clubbed"
        rows.append(f"{utterance_id}\t{verdict}")
    verdicts.write_text("\n".join(rows) + "\n")
    assert run(["verify-sample", "--score", str(verdicts)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["n_total"] == len(rows)
    assert summary["n_incorrect"] == summary["n_clubbed"] + summary["n_broken"]


def test_classify_qa_eval_prints_confusion(pipeline, capsys):
    rc = run(
        [
            "classify-qa", "apply", "--model", str(pipeline / "qa_model.json"),
            "--eval", f"{FIXTURES / 'qa' / 'hand_labeled_test.tsv'}:HandLabeled",
        ]
    )
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["n"] == 800
    assert payload["accuracy"] > 0.52625 + 0.10


def test_evaluate_predictions_mode(pipeline, tmp_path, capsys):
    examples = (pipeline / "examples.tsv").read_text().splitlines()
    header = examples[0].split("\t")
    id_col = header.index("example_id")
    party_col = header.index("party")
    kind_col = header.index("kind")
    rows = []
    for line in examples[1:]:
        cols = line.split("\t")
        if cols[kind_col] == "Question":
            rows.append(f"{cols[id_col]}\t{cols[party_col][0]}")
    predictions = tmp_path / "preds.tsv"
    predictions.write_text("\n".join(rows) + "\n")
    rc = run(
        [
            "evaluate", "--examples", str(pipeline / "examples.tsv"), "--task", "Affiliation",
            "--predictions", str(predictions), "--out-dir", str(tmp_path / "ext"),
        ]
    )
    assert rc == 0
    table = (tmp_path / "ext" / "external_predictions.tsv").read_text().splitlines()
    assert len(table) == 2
    assert "\t1.0\t" in table[1]  # perfect oracle predictions


def test_version_exits_zero(capsys):
    assert run(["--version"]) == 0
    assert "gavel" in capsys.readouterr().out


def test_fetch_requires_endpoint_and_ids(capsys):
    assert run(["fetch", "--cache-dir", "/tmp/c"]) == 1
    assert "--endpoint" in capsys.readouterr().err
    assert run(["fetch", "--endpoint", "https://x.test/{hearing_id}", "--cache-dir", "/tmp/c"]) == 1
    assert "no hearing ids" in capsys.readouterr().err


def test_segment_with_custom_rules_file(tmp_path):
    from gavel.segmenter import SegmenterRules

    rules_path = tmp_path / "rules.json"
    SegmenterRules().to_file(rules_path)
    out = tmp_path / "store"
    assert run(["segment", "--input", str(FIXTURES / "hearings"), "--output", str(out),
                "--rules", str(rules_path)]) == 0
    assert (out / "segmentation_report.json").is_file()


def test_segment_rejects_malformed_rules_file(tmp_path, capsys):
    rules_path = tmp_path / "rules.json"
    rules_path.write_text(json.dumps({"marker_patterns": ["(no name group"]}))
    assert run(["segment", "--input", str(FIXTURES / "hearings"), "--output", str(tmp_path / "s"),
                "--rules", str(rules_path)]) == 1


def test_prompts_content_matches_renderer(pipeline):
    from gavel.harness import render_prompt

    lines = (pipeline / "prompts.jsonl").read_text().splitlines()
    assert lines
    record = json.loads(lines[0])
    assert record["prompt"].startswith("What follows is a question and its answer in a congressional hearing:")
    assert "Do not explain." in record["prompt"]
    assert "{" not in record["prompt"].replace("{", "", 0)  # no unresolved placeholders survive
    # cross-check one rendering against the library call
    pairs = (pipeline / "pairs.jsonl").read_text().splitlines()
    first_pair = json.loads(pairs[0])
    corpus_dir = pipeline / "corpus" / first_pair["hearing_id"]
    utts = {}
    for line in (corpus_dir / "utterances.jsonl").read_text().splitlines():
        rec = json.loads(line)
        utts[rec["utterance_id"]] = rec["text"]
    expected = render_prompt(
        "Both",
        question_text=utts[first_pair["question_utterance_id"]],
        answer_text=utts[first_pair["answer_utterance_id"]],
    )
    by_id = {json.loads(l)["example_id"]: json.loads(l)["prompt"] for l in lines}
    assert by_id[first_pair["pair_id"]] == expected


def test_internal_error_exits_two(monkeypatch, tmp_path, capsys):
    import gavel.cli as cli_module

    def boom(path):
        raise RuntimeError("wires crossed")

    monkeypatch.setattr(cli_module, "load_corpus", boom)
    store = tmp_path / "corpus"
    assert run(["segment", "--input", str(FIXTURES / "hearings"), "--output", str(store)]) == 0
    assert run(["pair", "--corpus", str(store), "--output", str(tmp_path / "p.jsonl")]) == 2
    assert "RuntimeError" in capsys.readouterr().err


def test_jobs_flag_gives_identical_store(tmp_path):
    out1 = tmp_path / "s1"
    out2 = tmp_path / "s2"
    assert run(["segment", "--input", str(FIXTURES / "hearings"), "--output", str(out1), "--jobs", "1"]) == 0
    assert run(["segment", "--input", str(FIXTURES / "hearings"), "--output", str(out2), "--jobs", "4"]) == 0
    files1 = sorted(p.relative_to(out1) for p in out1.rglob("*.jsonl"))
    files2 = sorted(p.relative_to(out2) for p in out2.rglob("*.jsonl"))
    assert files1 == files2
    for rel in files1:
        assert (out1 / rel).read_bytes() == (out2 / rel).read_bytes()


def test_features_jobs_flag_identical_output(pipeline, tmp_path):
    corpus = pipeline / "corpus"
    argv = [
        "features", "--corpus", str(corpus), "--pairs", str(pipeline / "pairs.jsonl"),
        "--government", str(FIXTURES / "government_context.json"),
    ]
    assert run(argv + ["--output", str(tmp_path / "j1.tsv"), "--jobs", "1"]) == 0
    assert run(argv + ["--output", str(tmp_path / "j4.tsv"), "--jobs", "4"]) == 0
    assert (tmp_path / "j1.tsv").read_bytes() == (tmp_path / "j4.tsv").read_bytes()


def test_evaluate_byte_identical_tables(tmp_path):
    corpus = tmp_path / "corpus"
    assert run(["segment", "--input", str(FIXTURES / "hearings"), "--output", str(corpus)]) == 0
    # label from ground truth-ish questions by reusing classify-qa with a quick model
    model = tmp_path / "m.json"
    assert run(
        [
            "classify-qa", "train",
            "--train", f"{FIXTURES / 'qa' / 'ama_train.tsv'}:AMA",
            "--model-out", str(model), "--epochs", "12",
        ]
    ) == 0
    assert run(["classify-qa", "apply", "--model", str(model), "--corpus", str(corpus)]) == 0
    examples = tmp_path / "ex.tsv"
    assert run(
        [
            "features", "--corpus", str(corpus),
            "--government", str(FIXTURES / "government_context.json"),
            "--output", str(examples),
        ]
    ) == 0
    common = ["--min-rows", "4", "--cv-folds", "2"]
    rc1 = run(["evaluate", "--examples", str(examples), *common, "--out-dir", str(tmp_path / "e1")])
    rc2 = run(["evaluate", "--examples", str(examples), *common, "--out-dir", str(tmp_path / "e2")])
    assert rc1 == 0 and rc2 == 0
    assert (tmp_path / "e1" / "split_grid.tsv").read_bytes() == (tmp_path / "e2" / "split_grid.tsv").read_bytes()
