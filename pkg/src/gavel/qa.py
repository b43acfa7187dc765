"""Question/answer utterance classification and Q-A pairing.

The classifier is regularized logistic regression over lexical features:
lowercased unigram and bigram counts plus three structural cues (terminal
question mark, interrogative leading token, token-count bucket). Bigrams
are capped at the most frequent 50k, ties broken lexicographically so the
vocabulary is reproducible. Ties at probability 0.5 resolve to Question,
the rarer, pairing-triggering class.

Training corpora come from three delimiter-separated layouts (see
docs/formats.md): AMA-style threads, written parliamentary Q&A, and plain
hand-labeled rows.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .corpus import Person, QALabel, QAPair, RecordError, Role, Utterance
from .linear import TrainingMeta, predict_proba, train_binary_logistic

MODEL_FORMAT_VERSION = 1
BIGRAM_CAP = 50_000

TOKEN_RE = re.compile(r"[a-z0-9']+")

INTERROGATIVE_LEADS = frozenset(
    (
        "who what when where why how which whom whose "
        "is are was were am do does did can could will would should shall may might "
        "has have had isn't aren't don't doesn't didn't won't wouldn't couldn't shouldn't can't"
    ).split()
)

QMARK_FEATURE = "__qmark__"
INTERROGATIVE_FEATURE = "__interrogative__"
LEN_BUCKET_PREFIX = "__len"
_N_LEN_BUCKETS = 8


class Source(str, Enum):
    AMA = "AMA"
    UKPARL = "UKParl"
    HAND_LABELED = "HandLabeled"


@dataclass(frozen=True)
class LabeledText:
    text: str
    label: QALabel
    source: Source

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("labeled text must be non-empty")
        if self.label not in (QALabel.QUESTION, QALabel.ANSWER):
            raise ValueError("training labels are Question or Answer")


@dataclass(frozen=True)
class LoadReport:
    path: str
    n_rows: int
    n_kept: int
    duplicates_removed: int


def load_training_corpus(path: Path | str, fmt: Source) -> tuple[list[LabeledText], LoadReport]:
    """Read one training file; duplicates (normalized text) are dropped and counted."""
    path = Path(path)
    rows: list[LabeledText] = []
    seen: set[str] = set()
    duplicates = 0
    n_rows = 0
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            n_rows += 1
            text, label = _parse_row(line, fmt, str(path), line_no)
            if not text.strip():
                raise RecordError("empty text", path=str(path), line_no=line_no, field_name="text")
            key = " ".join(text.split()).lower()
            if key in seen:
                duplicates += 1
                continue
            seen.add(key)
            rows.append(LabeledText(text=text, label=label, source=fmt))
    return rows, LoadReport(path=str(path), n_rows=n_rows, n_kept=len(rows), duplicates_removed=duplicates)


def _parse_row(line: str, fmt: Source, path: str, line_no: int) -> tuple[str, QALabel]:
    cols = line.split("\t")
    if fmt is Source.HAND_LABELED:
        if len(cols) != 2:
            raise RecordError("expected 2 tab-separated columns (text, label)", path=path, line_no=line_no)
        text, label_raw = cols
        try:
            return text, QALabel(label_raw)
        except ValueError:
            raise RecordError(f"unknown label {label_raw!r}", path=path, line_no=line_no, field_name="label")
    if fmt is Source.AMA:
        # thread_id, comment_level, text; level 1 comments are the questions,
        # the poster's level 2 replies are the answers
        if len(cols) != 3:
            raise RecordError(
                "expected 3 tab-separated columns (thread_id, level, text)", path=path, line_no=line_no
            )
        _, level, text = cols
        if level == "1":
            return text, QALabel.QUESTION
        if level == "2":
            return text, QALabel.ANSWER
        raise RecordError(f"comment level must be 1 or 2, got {level!r}", path=path, line_no=line_no, field_name="level")
    if fmt is Source.UKPARL:
        # record_id, kind, text; written questions and their ministerial answers
        if len(cols) != 3:
            raise RecordError(
                "expected 3 tab-separated columns (record_id, kind, text)", path=path, line_no=line_no
            )
        _, kind, text = cols
        kind = kind.lower()
        if kind == "question":
            return text, QALabel.QUESTION
        if kind == "answer":
            return text, QALabel.ANSWER
        raise RecordError(f"kind must be question or answer, got {kind!r}", path=path, line_no=line_no, field_name="kind")
    raise RecordError(f"unknown corpus format {fmt!r}", path=path, line_no=line_no)


def featurize_text(text: str) -> dict[str, float]:
    """Sparse token-count features; deterministic in the input string."""
    tokens = TOKEN_RE.findall(text.lower())
    feats: dict[str, float] = {}
    for t in tokens:
        feats["u:" + t] = feats.get("u:" + t, 0.0) + 1.0
    for t1, t2 in zip(tokens, tokens[1:]):
        key = f"b:{t1} {t2}"
        feats[key] = feats.get(key, 0.0) + 1.0
    if text.rstrip().endswith("?"):
        feats[QMARK_FEATURE] = 1.0
    if tokens and tokens[0] in INTERROGATIVE_LEADS:
        feats[INTERROGATIVE_FEATURE] = 1.0
    bucket = min(len(tokens) // 8, _N_LEN_BUCKETS - 1)
    feats[f"{LEN_BUCKET_PREFIX}{bucket}__"] = 1.0
    return feats


@dataclass(frozen=True)
class LexicalModel:
    vocabulary: Mapping[str, int]
    weights: tuple[float, ...]
    bias: float
    training_meta: TrainingMeta

    def __post_init__(self):
        if len(self.weights) != len(self.vocabulary):
            raise ValueError("weight vector length must equal vocabulary size")

    def vectorize(self, text: str) -> dict[int, float]:
        row = {}
        for name, value in featurize_text(text).items():
            idx = self.vocabulary.get(name)
            if idx is not None:
                row[idx] = value
        return row


@dataclass(frozen=True)
class QAHyper:
    learning_rate: float = 0.5
    epochs: int = 60
    l2: float = 1e-4
    seed: int = 0


def build_vocabulary(featurized: Iterable[Mapping[str, float]], bigram_cap: int = BIGRAM_CAP) -> dict[str, int]:
    counts: dict[str, float] = {}
    for feats in featurized:
        for name, value in feats.items():
            counts[name] = counts.get(name, 0.0) + value
    bigrams = [n for n in counts if n.startswith("b:")]
    # most frequent first; lexicographic tie-break keeps the cut reproducible
    bigrams.sort(key=lambda n: (-counts[n], n))
    kept = set(bigrams[:bigram_cap])
    names = sorted(n for n in counts if not n.startswith("b:") or n in kept)
    return {name: i for i, name in enumerate(names)}


def train_qa(corpus: Sequence[LabeledText], hyper: QAHyper = QAHyper()) -> tuple[LexicalModel, list[float]]:
    """Train the lexical classifier; returns the model and the loss trace."""
    labels_present = {r.label for r in corpus}
    if labels_present != {QALabel.QUESTION, QALabel.ANSWER}:
        raise ValueError("training corpus must contain both Question and Answer rows")
    featurized = [featurize_text(r.text) for r in corpus]
    vocab = build_vocabulary(featurized)
    rows = [
        {vocab[name]: value for name, value in feats.items() if name in vocab} for feats in featurized
    ]
    y = [1 if r.label is QALabel.QUESTION else 0 for r in corpus]
    core, trace = train_binary_logistic(
        rows,
        y,
        n_features=len(vocab),
        learning_rate=hyper.learning_rate,
        epochs=hyper.epochs,
        l2=hyper.l2,
        seed=hyper.seed,
    )
    model = LexicalModel(vocabulary=vocab, weights=core.weights, bias=core.bias, training_meta=core.meta)
    return model, trace


def classify_qa(
    model: LexicalModel, text: str, other_band: Optional[float] = None
) -> tuple[QALabel, float]:
    """Label an utterance; confidence is the winning-class probability.

    With `other_band` set, predictions within that margin of 0.5 come back
    as Other (calibration is left to the caller).
    """
    p_question = predict_proba(model.weights, model.bias, model.vectorize(text))
    if other_band is not None and abs(p_question - 0.5) < other_band:
        return QALabel.OTHER, max(p_question, 1.0 - p_question)
    if p_question >= 0.5:
        return QALabel.QUESTION, p_question
    return QALabel.ANSWER, 1.0 - p_question


@dataclass(frozen=True)
class ConfusionCounts:
    """Q/A confusion counts: *_true = correctly labeled, *_false = mislabeled."""

    q_true: int
    q_false: int
    a_true: int
    a_false: int

    @property
    def total(self) -> int:
        return self.q_true + self.q_false + self.a_true + self.a_false

    @property
    def accuracy(self) -> float:
        if self.total == 0:
            raise ValueError("empty confusion matrix")
        return (self.q_true + self.a_true) / self.total

    def display_accuracy(self, places: int = 2) -> str:
        return f"{self.accuracy:.{places}f}"

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.q_true + other.q_true,
            self.q_false + other.q_false,
            self.a_true + other.a_true,
            self.a_false + other.a_false,
        )


def score_confusion(predictions: Sequence[QALabel], truths: Sequence[QALabel]) -> ConfusionCounts:
    if len(predictions) != len(truths):
        raise ValueError(f"length mismatch: {len(predictions)} predictions vs {len(truths)} truths")
    q_true = q_false = a_true = a_false = 0
    for pred, truth in zip(predictions, truths):
        if pred is QALabel.QUESTION:
            if truth is QALabel.QUESTION:
                q_true += 1
            else:
                q_false += 1
        elif pred is QALabel.ANSWER:
            if truth is QALabel.ANSWER:
                a_true += 1
            else:
                a_false += 1
        else:
            raise ValueError(f"predictions must be Question or Answer, got {pred}")
    return ConfusionCounts(q_true, q_false, a_true, a_false)


@dataclass(frozen=True)
class PairingReport:
    unpaired_questions: tuple[str, ...]
    orphan_answers: tuple[str, ...]
    skipped: tuple[str, ...]  # utterances with no pairing role (Other/Unknown/etc)


def pair_qa(
    utterances: Sequence[Utterance], people: Mapping[str, Person]
) -> tuple[list[QAPair], PairingReport]:
    """Pair each member question with the next witness answer.

    A later member question supersedes an unanswered earlier one (the earlier
    question is reported, never silently dropped); witness answers with no
    pending question are reported as orphans. Member-to-member and
    witness-initiated exchanges do not pair.
    """
    pairs: list[QAPair] = []
    unpaired: list[str] = []
    orphans: list[str] = []
    skipped: list[str] = []
    pending: Optional[Utterance] = None
    for utt in sorted(utterances, key=lambda u: u.sequence_no):
        person = people.get(utt.speaker)
        role = person.role if person else Role.UNKNOWN
        if utt.qa_label is QALabel.QUESTION and role is Role.MEMBER:
            if pending is not None:
                unpaired.append(pending.utterance_id)
            pending = utt
        elif utt.qa_label is QALabel.ANSWER and role is Role.WITNESS:
            if pending is None:
                orphans.append(utt.utterance_id)
            else:
                pairs.append(
                    QAPair(
                        pair_id=f"{utt.hearing_id}-p{len(pairs):05d}",
                        question_utterance_id=pending.utterance_id,
                        answer_utterance_id=utt.utterance_id,
                        questioner=pending.speaker,
                        answerer=utt.speaker,
                    )
                )
                pending = None
        else:
            skipped.append(utt.utterance_id)
    if pending is not None:
        unpaired.append(pending.utterance_id)
    return pairs, PairingReport(tuple(unpaired), tuple(orphans), tuple(skipped))


def save_pairs(pairs_by_hearing: Mapping[str, Sequence[QAPair]], path: Path | str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for hearing_id in sorted(pairs_by_hearing):
            for pair in pairs_by_hearing[hearing_id]:
                rec = pair.to_record()
                rec["hearing_id"] = hearing_id
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def load_pairs(path: Path | str) -> dict[str, list[QAPair]]:
    out: dict[str, list[QAPair]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordError(f"malformed pair record: {exc}", path=str(path), line_no=line_no)
            out.setdefault(rec["hearing_id"], []).append(QAPair.from_record(rec))
    return out


def save_model(model: LexicalModel, path: Path | str) -> None:
    record = {
        "format_version": MODEL_FORMAT_VERSION,
        "vocabulary": dict(model.vocabulary),
        "weights": list(model.weights),
        "bias": model.bias,
        "training_meta": {
            "seed": model.training_meta.seed,
            "epochs": model.training_meta.epochs,
            "learning_rate": model.training_meta.learning_rate,
            "l2": model.training_meta.l2,
            "n_examples": model.training_meta.n_examples,
        },
    }
    Path(path).write_text(json.dumps(record) + "\n", encoding="utf-8")


def load_model(path: Path | str) -> LexicalModel:
    path = Path(path)
    try:
        record = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise RecordError(f"invalid model file: {exc}", path=str(path))
    version = record.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise RecordError(f"unsupported model format_version {version!r}", path=str(path))
    meta = record["training_meta"]
    return LexicalModel(
        vocabulary=record["vocabulary"],
        weights=tuple(record["weights"]),
        bias=record["bias"],
        training_meta=TrainingMeta(
            seed=meta["seed"],
            epochs=meta["epochs"],
            learning_rate=meta["learning_rate"],
            l2=meta["l2"],
            n_examples=meta["n_examples"],
        ),
    )
