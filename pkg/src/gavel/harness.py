"""Experiment grid: dataset assembly, split-wise evaluation, table emission.

Examples are built per question-answer exchange: the Question row carries
the question utterance's features, the Answer row the paired answer's, and
the Both row the concatenated pair; every row is labeled with the
questioner's party and standing. Datasets are then partitioned along any
subset of five dimensions (committee, session, hearing type,
unified/divided government, presidency), each split is trained and scored
against its own majority-class baseline, and results land in stable,
byte-reproducible delimiter-separated tables.

Zero-shot prompt rendering is included so external models can be driven
from the same examples; their label files feed back in through
`score_predictions_file`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .corpus import (
    GovernmentContext,
    HearingMeta,
    QALabel,
    QAPair,
    RecordError,
    Role,
    Roster,
    Utterance,
    derive_standing,
)
from .features import SCHEMA, FeatureVector, extract_features, format_value, parse_value
from .forest import ForestHyper, derive_seed, predict_forest, train_forest
from .lexicons import Lexicons
from .party_models import (
    DataRow,
    Dataset,
    EvalReport,
    GroupKeys,
    LogisticHyper,
    Task,
    column_medians,
    cross_validate_grid,
    feature_importance,
    impute,
    majority_baseline,
    strip_speaker_names,
    train_logistic,
)
from .qa import ConfusionCounts

DIMENSIONS = ("committee", "session", "hearing_type", "government", "presidency")

KINDS = ("Question", "Answer", "Both")

META_COLUMNS = (
    "example_id",
    "kind",
    "hearing_id",
    "session",
    "committee",
    "chamber",
    "hearing_type",
    "government",
    "presidency",
    "party",
    "standing",
)


@dataclass(frozen=True)
class ExampleRow:
    example_id: str
    kind: str
    hearing_id: str
    session: int
    committee: str
    chamber: str
    hearing_type: str
    government: str
    presidency: str
    party: str
    standing: str
    features: FeatureVector

    def group_keys(self) -> GroupKeys:
        return GroupKeys(
            session=self.session,
            committee=self.committee,
            chamber=self.chamber,
            hearing_type=self.hearing_type,
            government=self.government,
            presidency=self.presidency,
        )

    def dim_value(self, dim: str) -> str:
        if dim == "session":
            return str(self.session)
        return getattr(self, dim)


def build_examples(
    corpus: Sequence[tuple[HearingMeta, Sequence[Utterance]]],
    rosters: Mapping[str, Roster],
    gov_config: Mapping[int, GovernmentContext],
    lexicons: Lexicons,
    pairs: Mapping[str, Sequence[QAPair]] | None = None,
    member_directory: Iterable[str] = (),
    strip_names: bool = True,
    kinds: Sequence[str] = KINDS,
) -> tuple[list[ExampleRow], list[str]]:
    """Featurized, labeled example rows; returns (rows, warnings).

    Names are removed from text before feature extraction unless
    `strip_names` is off, so speaker identity cannot leak into features.
    """
    rows: list[ExampleRow] = []
    warnings: list[str] = []
    directory = tuple(member_directory)
    for meta, utterances in corpus:
        roster = rosters.get(meta.hearing_id)
        if roster is None:
            warnings.append(f"{meta.hearing_id}: no roster, skipped")
            continue
        ctx = gov_config.get(meta.session)
        if ctx is None:
            warnings.append(f"{meta.hearing_id}: no government context for session {meta.session}, skipped")
            continue
        government = "Unified" if ctx.unified else "Divided"
        presidency = ctx.president_party.value
        people = {p.person_id: p for p in roster.people}
        by_id = {u.utterance_id: u for u in utterances}

        def featurize(text: str) -> FeatureVector:
            if strip_names:
                text = strip_speaker_names(text, roster, directory)
            return extract_features(text, lexicons)

        def labels_for(member_id: str) -> Optional[tuple[str, str]]:
            person = people.get(member_id)
            if person is None or person.role is not Role.MEMBER:
                return None
            try:
                standing = derive_standing(person, meta, ctx)
            except Exception as exc:
                warnings.append(f"{meta.hearing_id}/{member_id}: standing unresolved ({exc})")
                return None
            return person.party.value, standing.value

        if "Question" in kinds:
            for u in utterances:
                if u.qa_label is not QALabel.QUESTION:
                    continue
                labels = labels_for(u.speaker)
                if labels is None:
                    continue
                rows.append(
                    ExampleRow(
                        example_id=u.utterance_id,
                        kind="Question",
                        hearing_id=meta.hearing_id,
                        session=meta.session,
                        committee=meta.committee,
                        chamber=meta.chamber.value,
                        hearing_type=meta.hearing_type.value,
                        government=government,
                        presidency=presidency,
                        party=labels[0],
                        standing=labels[1],
                        features=featurize(u.text),
                    )
                )
        hearing_pairs = (pairs or {}).get(meta.hearing_id, ())
        for pair in hearing_pairs:
            labels = labels_for(pair.questioner)
            if labels is None:
                continue
            question = by_id.get(pair.question_utterance_id)
            answer = by_id.get(pair.answer_utterance_id)
            if question is None or answer is None:
                warnings.append(f"{meta.hearing_id}/{pair.pair_id}: pair references unknown utterances")
                continue
            common = dict(
                hearing_id=meta.hearing_id,
                session=meta.session,
                committee=meta.committee,
                chamber=meta.chamber.value,
                hearing_type=meta.hearing_type.value,
                government=government,
                presidency=presidency,
                party=labels[0],
                standing=labels[1],
            )
            if "Answer" in kinds:
                rows.append(
                    ExampleRow(
                        example_id=answer.utterance_id, kind="Answer", features=featurize(answer.text), **common
                    )
                )
            if "Both" in kinds:
                rows.append(
                    ExampleRow(
                        example_id=pair.pair_id,
                        kind="Both",
                        features=featurize(question.text + "\n" + answer.text),
                        **common,
                    )
                )
    rows.sort(key=lambda r: (r.kind, r.example_id))
    return rows, warnings


def write_examples(rows: Sequence[ExampleRow], path: Path | str, delimiter: str = "\t") -> None:
    header = delimiter.join(META_COLUMNS + SCHEMA)
    lines = [header]
    for r in rows:
        meta = [
            r.example_id,
            r.kind,
            r.hearing_id,
            str(r.session),
            r.committee,
            r.chamber,
            r.hearing_type,
            r.government,
            r.presidency,
            r.party,
            r.standing,
        ]
        lines.append(delimiter.join(meta + [format_value(v) for v in r.features.values]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_examples(path: Path | str, delimiter: str = "\t") -> list[ExampleRow]:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise RecordError("empty examples file", path=str(path))
    header = lines[0].split(delimiter)
    expected = list(META_COLUMNS + SCHEMA)
    if header != expected:
        raise RecordError(
            f"unexpected header (schema version mismatch?): {header[:4]}...", path=str(path), line_no=1
        )
    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cols = line.split(delimiter)
        if len(cols) != len(expected):
            raise RecordError(f"expected {len(expected)} columns, got {len(cols)}", path=str(path), line_no=line_no)
        meta = cols[: len(META_COLUMNS)]
        try:
            features = FeatureVector([parse_value(v) for v in cols[len(META_COLUMNS) :]])
        except ValueError as exc:
            raise RecordError(f"bad feature value: {exc}", path=str(path), line_no=line_no)
        rows.append(
            ExampleRow(
                example_id=meta[0],
                kind=meta[1],
                hearing_id=meta[2],
                session=int(meta[3]),
                committee=meta[4],
                chamber=meta[5],
                hearing_type=meta[6],
                government=meta[7],
                presidency=meta[8],
                party=meta[9],
                standing=meta[10],
                features=features,
            )
        )
    return rows


@dataclass(frozen=True)
class SplitSpec:
    dimensions: tuple[str, ...] = ()
    utterance_kind: str = "Question"
    task: Task = Task.AFFILIATION
    min_rows: int = 50

    def __post_init__(self):
        bad = [d for d in self.dimensions if d not in DIMENSIONS]
        if bad:
            raise ValueError(f"unknown split dimensions {bad}; valid: {DIMENSIONS}")
        # canonical dimension order keeps split keys stable
        object.__setattr__(
            self, "dimensions", tuple(d for d in DIMENSIONS if d in self.dimensions)
        )
        if self.utterance_kind not in KINDS:
            raise ValueError(f"utterance_kind must be one of {KINDS}")
        if self.min_rows < 2:
            raise ValueError("min_rows must be at least 2")


@dataclass(frozen=True)
class SplitSkip:
    key: tuple[tuple[str, str], ...]
    n_rows: int
    reason: str


def build_datasets(
    examples: Sequence[ExampleRow], spec: SplitSpec
) -> tuple[list[tuple[tuple[tuple[str, str], ...], Dataset]], list[SplitSkip]]:
    """Partition example rows into one Dataset per split-key tuple.

    Every selected row lands in exactly one split or one skip record.
    """
    valid_labels = set(Dataset(rows=(), label_task=spec.task, schema=SCHEMA).label_order)
    selected = [r for r in examples if r.kind == spec.utterance_kind]
    groups: dict[tuple[tuple[str, str], ...], list[ExampleRow]] = {}
    for r in selected:
        label = r.party if spec.task is Task.AFFILIATION else r.standing
        if label not in valid_labels:
            continue
        key = tuple((d, r.dim_value(d)) for d in spec.dimensions)
        groups.setdefault(key, []).append(r)
    datasets = []
    skips = []
    for key in sorted(groups):
        rows = groups[key]
        if len(rows) < spec.min_rows:
            skips.append(SplitSkip(key=key, n_rows=len(rows), reason=f"fewer than min_rows={spec.min_rows}"))
            continue
        data_rows = tuple(
            DataRow(
                features=r.features.values,
                label=r.party if spec.task is Task.AFFILIATION else r.standing,
                groups=r.group_keys(),
                row_id=r.example_id,
            )
            for r in sorted(rows, key=lambda r: r.example_id)
        )
        datasets.append((key, Dataset(rows=data_rows, label_task=spec.task, schema=SCHEMA)))
    return datasets, skips


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "forest"  # "forest" or "logistic"
    grid: tuple[ForestHyper, ...] = (ForestHyper(n_estimators=30, max_depth=8),)
    logistic_hyper: LogisticHyper = LogisticHyper()
    cv_folds: int = 5
    test_fraction: float = 0.2
    seed: int = 108

    def __post_init__(self):
        if self.model not in ("forest", "logistic"):
            raise ValueError("model must be 'forest' or 'logistic'")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must be in (0, 1)")
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be >= 2")


def _stratified_holdout(
    labels: Sequence[str], fraction: float, seed: int
) -> tuple[list[int], list[int]]:
    by_class: dict[str, list[int]] = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, []).append(i)
    rng = random.Random(seed)
    test: list[int] = []
    for lab in sorted(by_class):
        idxs = by_class[lab]
        rng.shuffle(idxs)
        n_test = max(1, round(fraction * len(idxs))) if len(idxs) > 1 else 0
        n_test = min(n_test, len(idxs) - 1)
        test.extend(idxs[:n_test])
    test_set = set(test)
    train = [i for i in range(len(labels)) if i not in test_set]
    return train, sorted(test)


def _impute_with_medians(rows: Sequence[Sequence[Optional[float]]]) -> tuple[list[list[float]], list[float]]:
    width = len(rows[0]) if rows else 0
    medians = column_medians(rows, width)
    return impute(rows, medians), medians


def run_experiment(
    datasets: Sequence[tuple[tuple[tuple[str, str], ...], Dataset]],
    config: ExperimentConfig = ExperimentConfig(),
) -> list[EvalReport]:
    """Train and score each split; failures are recorded, the run continues."""
    if not datasets:
        raise ValueError("no datasets to run")
    reports: list[EvalReport] = []
    for split_no, (key, dataset) in enumerate(datasets):
        try:
            reports.append(_run_split(key, dataset, config, derive_seed(config.seed, split_no)))
        except Exception as exc:  # recorded, never fatal to the grid
            reports.append(
                EvalReport(
                    split_key=key,
                    task=dataset.label_task,
                    accuracy=0.0,
                    baseline_accuracy=0.0,
                    baseline_class="",
                    confusion=(),
                    n_train=0,
                    n_test=0,
                    error=f"{type(exc).__name__}: {exc}",
                )
            )
    return reports


def _run_split(key, dataset: Dataset, config: ExperimentConfig, seed: int) -> EvalReport:
    labels = dataset.labels
    order = dataset.label_order
    train_idx, test_idx = _stratified_holdout(labels, config.test_fraction, seed)
    raw_rows = [list(r.features) for r in dataset.rows]
    x_train, medians = _impute_with_medians([raw_rows[i] for i in train_idx])
    y_train = [labels[i] for i in train_idx]
    x_test = impute([raw_rows[i] for i in test_idx], medians)
    y_test = [labels[i] for i in test_idx]
    base_class, base_acc = majority_baseline(y_test, order)
    present_train = set(y_train)
    degenerate = len(present_train) < 2 or len(set(y_test)) < 2
    importances = None
    if len(present_train) < 2:
        # single-class split: constant prediction, flagged, never suppressed
        constant = next(iter(present_train))
        predictions = [constant] * len(y_test)
    elif config.model == "forest":
        classes = [c for c in order if c in present_train]
        if len(config.grid) > 1:
            best, _, _ = cross_validate_grid(x_train, y_train, classes, config.grid, k=config.cv_folds, seed=seed)
        else:
            best = config.grid[0]
        hyper = ForestHyper(
            n_estimators=best.n_estimators,
            max_depth=best.max_depth,
            min_samples_split=best.min_samples_split,
            max_features=best.max_features,
            seed=seed,
        )
        model = train_forest(x_train, y_train, classes, hyper)
        predictions = [predict_forest(model, row)[0] for row in x_test]
        importances = tuple(sorted(feature_importance(model, schema=dataset.schema).items()))
    else:
        classes = [c for c in order if c in present_train]
        model = train_logistic(x_train, y_train, classes, config.logistic_hyper)
        predictions = [model.predict(row)[0] for row in x_test]
    confusion: dict[tuple[str, str], int] = {}
    hits = 0
    for true_label, pred in zip(y_test, predictions):
        confusion[(true_label, pred)] = confusion.get((true_label, pred), 0) + 1
        if true_label == pred:
            hits += 1
    accuracy = hits / len(y_test)
    return EvalReport(
        split_key=key,
        task=dataset.label_task,
        accuracy=accuracy,
        baseline_accuracy=base_acc,
        baseline_class=base_class,
        confusion=tuple(sorted((t, p, n) for (t, p), n in confusion.items())),
        n_train=len(y_train),
        n_test=len(y_test),
        degenerate=degenerate,
        beats_baseline=accuracy > base_acc,
        importances=importances,
    )


# --- table emission ----------------------------------------------------------

LAYOUTS = ("split_grid", "committee", "hearing_type_government", "qa_sessions")

_BASE_CLASS_MARK = {
    "Democrat": "D",
    "Republican": "R",
    "Independent": "I",
    "Majority": "M",
    "Minority": "m",
    "Question": "Q",
    "Answer": "A",
    "": "",
}


def _fmt2(x: float) -> str:
    return f"{x:.2f}"


def _confusion_cell(report: EvalReport) -> str:
    return ";".join(f"{t}>{p}:{n}" for t, p, n in report.confusion)


def emit_tables(reports, layout: str, path: Path | str, delimiter: str = "\t") -> None:
    """Write one layout file; full-precision numbers plus 2-decimal display."""
    if layout == "split_grid":
        _emit_split_grid(reports, path, delimiter)
    elif layout == "committee":
        _emit_committee(reports, path, delimiter)
    elif layout == "hearing_type_government":
        _emit_ht_gov(reports, path, delimiter)
    elif layout == "qa_sessions":
        emit_qa_confusion_table(reports, path, delimiter)
    else:
        raise ValueError(f"unknown layout {layout!r}; valid: {LAYOUTS}")


def _emit_split_grid(reports: Sequence[EvalReport], path, delimiter) -> None:
    header = [
        "split",
        "task",
        "n_train",
        "n_test",
        "accuracy",
        "accuracy_2dp",
        "baseline",
        "baseline_2dp",
        "baseline_class",
        "beats_baseline",
        "degenerate",
        "confusion",
        "error",
    ]
    lines = [delimiter.join(header)]
    for r in sorted(reports, key=lambda r: r.split_label):
        lines.append(
            delimiter.join(
                [
                    r.split_label,
                    r.task.value,
                    str(r.n_train),
                    str(r.n_test),
                    repr(r.accuracy),
                    _fmt2(r.accuracy),
                    repr(r.baseline_accuracy),
                    _fmt2(r.baseline_accuracy),
                    _BASE_CLASS_MARK.get(r.baseline_class, r.baseline_class),
                    "true" if r.beats_baseline else "false",
                    "true" if r.degenerate else "false",
                    _confusion_cell(r),
                    r.error or "",
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _key_dict(report: EvalReport) -> dict[str, str]:
    return dict(report.split_key)


def _emit_committee(reports: Sequence[EvalReport], path, delimiter) -> None:
    header = ["committee", "accuracy", "accuracy_2dp", "baseline", "baseline_2dp", "baseline_class", "beats_baseline"]
    lines = [delimiter.join(header)]
    rows = [r for r in reports if "committee" in _key_dict(r) and r.error is None]
    for r in sorted(rows, key=lambda r: _key_dict(r)["committee"]):
        lines.append(
            delimiter.join(
                [
                    _key_dict(r)["committee"],
                    repr(r.accuracy),
                    _fmt2(r.accuracy),
                    repr(r.baseline_accuracy),
                    _fmt2(r.baseline_accuracy),
                    _BASE_CLASS_MARK.get(r.baseline_class, r.baseline_class),
                    "true" if r.beats_baseline else "false",
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _emit_ht_gov(reports: Sequence[EvalReport], path, delimiter) -> None:
    """Hearing-type x government rows; All/Democrat/Republican presidency columns."""
    cells: dict[tuple[str, str, str], EvalReport] = {}
    for r in reports:
        kd = _key_dict(r)
        if "hearing_type" not in kd or "government" not in kd or r.error is not None:
            continue
        presidency = kd.get("presidency", "All")
        cells[(kd["hearing_type"], kd["government"], presidency)] = r
    header = ["hearing_type", "government"]
    for block in ("all", "democrat_president", "republican_president"):
        header += [f"{block}_accuracy", f"{block}_accuracy_2dp", f"{block}_baseline", f"{block}_baseline_2dp", f"{block}_baseline_class", f"{block}_degenerate"]
    lines = [delimiter.join(header)]
    row_keys = sorted({(ht, gov) for ht, gov, _ in cells})
    for ht, gov in row_keys:
        cols = [ht, gov]
        for presidency in ("All", "Democrat", "Republican"):
            r = cells.get((ht, gov, presidency))
            if r is None:
                cols += [""] * 6
            else:
                cols += [
                    repr(r.accuracy),
                    _fmt2(r.accuracy),
                    repr(r.baseline_accuracy),
                    _fmt2(r.baseline_accuracy),
                    _BASE_CLASS_MARK.get(r.baseline_class, r.baseline_class),
                    "true" if r.degenerate else "false",
                ]
        lines.append(delimiter.join(cols))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_qa_confusion_table(
    counts_by_column: Sequence[tuple[str, ConfusionCounts]], path: Path | str, delimiter: str = "\t"
) -> None:
    """Q/A identification table: per-column counts plus a display accuracy row."""
    header = ["row"] + [label for label, _ in counts_by_column]
    lines = [delimiter.join(header)]
    getters = (
        ("questions_true", lambda c: str(c.q_true)),
        ("questions_false", lambda c: str(c.q_false)),
        ("answers_true", lambda c: str(c.a_true)),
        ("answers_false", lambda c: str(c.a_false)),
        ("accuracy", lambda c: repr(c.accuracy)),
        ("accuracy_2dp", lambda c: c.display_accuracy()),
    )
    for name, getter in getters:
        lines.append(delimiter.join([name] + [getter(c) for _, c in counts_by_column]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# --- zero-shot prompt rendering ----------------------------------------------

PROMPT_TEMPLATE = (
    "What follows is a {type_text} in a congressional hearing: {utterance_text} "
    "The question was asked by a person who is a member of a congressional committee, "
    "and whose party affiliation is either Democrat, Independent, or Republican. "
    "Based on the {type_text_2} above, what is the party affiliation of the person "
    "who asked the question? Answer with either D for Democrat, I for Independent, "
    "or R for Republican. Do not explain."
)

PROMPT_SUBSTITUTIONS: dict[str, tuple[str, str]] = {
    # kind -> (type_text, type_text_2)
    "Question": ("question that has been asked", "question"),
    "Answer": ("response to a question asked", "answer"),
    "Both": ("question and its answer", "question and answer"),
}


def render_prompt(kind: str, question_text: Optional[str] = None, answer_text: Optional[str] = None) -> str:
    if kind not in PROMPT_SUBSTITUTIONS:
        raise ValueError(f"kind must be one of {sorted(PROMPT_SUBSTITUTIONS)}")
    if kind in ("Question", "Both") and not question_text:
        raise ValueError(f"kind {kind} requires question_text")
    if kind in ("Answer", "Both") and not answer_text:
        raise ValueError(f"kind {kind} requires answer_text")
    type_text, type_text_2 = PROMPT_SUBSTITUTIONS[kind]
    if kind == "Question":
        utterance_text = f"Question: {question_text}"
    elif kind == "Answer":
        utterance_text = f"Answer: {answer_text}"
    else:
        utterance_text = f"Question: {question_text} Answer: {answer_text}"
    return PROMPT_TEMPLATE.format(
        type_text=type_text, utterance_text=utterance_text, type_text_2=type_text_2
    )


# --- external-prediction ingestion -------------------------------------------

def read_predictions_file(path: Path | str, delimiter: str = "\t") -> list[tuple[str, str]]:
    """Rows of (example_id, predicted_label); header line allowed."""
    path = Path(path)
    out = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split(delimiter)
            if line_no == 1 and cols[0] in ("example_id", "utterance_id", "pair_id"):
                continue
            if len(cols) < 2:
                raise RecordError("expected (example_id, predicted_label)", path=str(path), line_no=line_no)
            out.append((cols[0], cols[1]))
    return out


_LABEL_ALIASES = {
    "d": "Democrat",
    "r": "Republican",
    "i": "Independent",
    "democrat": "Democrat",
    "republican": "Republican",
    "independent": "Independent",
    "majority": "Majority",
    "minority": "Minority",
}


def score_predictions(
    predictions: Sequence[tuple[str, str]],
    examples: Sequence[ExampleRow],
    task: Task,
) -> tuple[EvalReport, list[str]]:
    """Score an external model's label file against example-row truth."""
    truth: dict[str, str] = {}
    for r in examples:
        truth[r.example_id] = r.party if task is Task.AFFILIATION else r.standing
    order = Dataset(rows=(), label_task=task, schema=SCHEMA).label_order
    warnings = []
    matched: list[tuple[str, str]] = []
    for example_id, raw_label in predictions:
        raw = raw_label.strip()
        # M/m are case-significant: majority vs minority
        if raw == "M":
            label = "Majority"
        elif raw == "m":
            label = "Minority"
        else:
            label = _LABEL_ALIASES.get(raw.lower())
        if label is None or label not in order:
            warnings.append(f"{example_id}: unusable predicted label {raw_label!r}")
            continue
        true_label = truth.get(example_id)
        if true_label is None or true_label not in order:
            warnings.append(f"{example_id}: no labeled example for this id")
            continue
        matched.append((true_label, label))
    if not matched:
        raise ValueError("no predictions matched labeled examples")
    confusion: dict[tuple[str, str], int] = {}
    hits = 0
    for t, p in matched:
        confusion[(t, p)] = confusion.get((t, p), 0) + 1
        hits += t == p
    base_class, base_acc = majority_baseline([t for t, _ in matched], order)
    accuracy = hits / len(matched)
    report = EvalReport(
        split_key=(("source", "external-predictions"),),
        task=task,
        accuracy=accuracy,
        baseline_accuracy=base_acc,
        baseline_class=base_class,
        confusion=tuple(sorted((t, p, n) for (t, p), n in confusion.items())),
        n_train=0,
        n_test=len(matched),
        beats_baseline=accuracy > base_acc,
    )
    return report, warnings
