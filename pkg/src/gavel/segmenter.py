"""Transcript trimming, utterance segmentation and speaker resolution.

Hearing transcripts are one unstructured text file: boilerplate, then
proceedings in which each utterance opens with a speaker marker such as
"Mr. Smith." or "Chairwoman MALONEY." on a new line. Formatting varies by
committee and era (honorifics, capitalization, "of <State>" suffixes), so
markers are matched by an ordered, editable list of line-anchored regexes.

Segmentation is span-exact: every character of the trimmed body lands in
the preamble, a marker, an utterance text or a recorded stage direction,
and `reconstruct` reassembles the body byte-for-byte. Bracketed stage
directions ("[Laughter.]") are transcriber annotations, not speech, and are
stripped from utterance text into the result with their offsets.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

from .corpus import (
    HearingMeta,
    QALabel,
    RecordError,
    Role,
    Roster,
    UNKNOWN_SPEAKER,
    Utterance,
    normalize_surname,
)

DEFAULT_HONORIFICS = (
    "Mr",
    "Mrs",
    "Ms",
    "Miss",
    "Dr",
    "Senator",
    "Chairman",
    "Chairwoman",
    "Chairperson",
    "Secretary",
    "General",
    "Admiral",
    "Governor",
    "Judge",
)

DEFAULT_START_PATTERNS = (
    r"(?im)^[ \t]*the committees? met\b",
    r"(?i)met, pursuant to",
    r"(?i)will come to order",
)

DEFAULT_END_PATTERNS = (
    r"(?im)^[ \t]*\[whereupon",
    r"(?i)\badjourned\b",
)

STAGE_DIRECTION_RE = re.compile(r"\[[^\[\]]*\]")

FEMALE_HONORIFICS = frozenset({"mrs", "ms", "miss", "chairwoman"})
MALE_HONORIFICS = frozenset({"mr", "chairman"})


class SegmentationFailed(Exception):
    """No speaker marker matched anywhere in the body."""


def default_marker_patterns(honorifics: Sequence[str] = DEFAULT_HONORIFICS) -> tuple[str, ...]:
    """Line-anchored marker regexes built over the honorific list.

    Each pattern must expose a `name` group (used for speaker resolution)
    and may expose `honorific`. The whole match is the marker span: leading
    indentation, the marker itself, its terminating period and one space.
    """
    hon = "|".join(re.escape(h) for h in honorifics)
    # [ \t] only: a marker never spans a line break
    name = r"[A-Z][A-Za-z'\-]*(?:[ \t]+[A-Z][A-Za-z'\-]*)?"
    state = r"[A-Z][a-z]+(?:[ \t]+[A-Z][a-z]+)?"
    return (
        # "Mr. Smith." / "Chairwoman MALONEY." / "Ms. Jones of Ohio."
        rf"^[ \t]*(?P<honorific>{hon})\.?[ \t]+(?P<name>{name})(?:[ \t]+of[ \t]+{state})?\.[ \t]?",
        # "The CHAIRMAN." / "The Chairwoman."
        r"^[ \t]*(?P<name>The[ \t]+(?:Acting[ \t]+)?C(?:hairman|hairwoman|HAIRMAN|HAIRWOMAN|lerk|LERK))\.[ \t]?",
    )


@dataclass(frozen=True)
class SegmenterRules:
    start_patterns: tuple[str, ...] = DEFAULT_START_PATTERNS
    end_patterns: tuple[str, ...] = DEFAULT_END_PATTERNS
    marker_patterns: tuple[str, ...] = ()
    honorifics: tuple[str, ...] = DEFAULT_HONORIFICS

    def __post_init__(self):
        if not self.marker_patterns:
            object.__setattr__(self, "marker_patterns", default_marker_patterns(self.honorifics))
        for group_name, patterns in (
            ("start_patterns", self.start_patterns),
            ("end_patterns", self.end_patterns),
            ("marker_patterns", self.marker_patterns),
        ):
            if not patterns:
                raise ValueError(f"{group_name} must be non-empty")
            for p in patterns:
                try:
                    compiled = re.compile(p, re.MULTILINE)
                except re.error as exc:
                    raise ValueError(f"{group_name} pattern does not compile: {p!r} ({exc})")
                if group_name == "marker_patterns" and "name" not in compiled.groupindex:
                    raise ValueError(f"marker pattern lacks a 'name' group: {p}")

    @classmethod
    def from_file(cls, path: Path | str) -> "SegmenterRules":
        path = Path(path)
        try:
            rec = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise RecordError(f"invalid rules file: {exc}", path=str(path))
        kwargs = {}
        for key in ("start_patterns", "end_patterns", "marker_patterns", "honorifics"):
            if key in rec:
                kwargs[key] = tuple(rec[key])
        return cls(**kwargs)

    def to_file(self, path: Path | str) -> None:
        rec = {
            "start_patterns": list(self.start_patterns),
            "end_patterns": list(self.end_patterns),
            "marker_patterns": list(self.marker_patterns),
            "honorifics": list(self.honorifics),
        }
        Path(path).write_text(json.dumps(rec, indent=1) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class TrimResult:
    body: str
    trimmed_head_chars: int
    trimmed_tail_chars: int
    warnings: tuple[tuple[int, str], ...]


def _line_start(text: str, pos: int) -> int:
    return text.rfind("\n", 0, pos) + 1


def _line_end(text: str, pos: int) -> int:
    nl = text.find("\n", pos)
    return len(text) if nl == -1 else nl + 1


def _line_no(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def trim_proceedings(raw: str, rules: SegmenterRules) -> TrimResult:
    """Cut boilerplate before the first start anchor and after the last end anchor.

    Trimming is line-aligned: the body begins at the start of the line with
    the first start-pattern match and ends after the line with the last
    end-pattern match. Missing anchors warn, never fail.
    """
    if not raw:
        raise ValueError("empty transcript")
    warnings: list[tuple[int, str]] = []
    starts = []
    for p in rules.start_patterns:
        m = re.compile(p, re.MULTILINE).search(raw)
        if m:
            starts.append(m.start())
    if starts:
        begin = _line_start(raw, min(starts))
    else:
        begin = 0
        warnings.append((1, "no start anchor matched; keeping the head"))
    ends = []
    for p in rules.end_patterns:
        for m in re.compile(p, re.MULTILINE).finditer(raw, begin):
            ends.append(m.start())
    if ends:
        end = _line_end(raw, max(ends))
    else:
        end = len(raw)
        warnings.append((_line_no(raw, len(raw) - 1), "no end anchor matched; keeping the tail"))
    return TrimResult(
        body=raw[begin:end],
        trimmed_head_chars=begin,
        trimmed_tail_chars=len(raw) - end,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class Segment:
    marker_raw: str  # exact characters consumed by the marker match
    name_text: str  # the captured name, e.g. "Smith"
    honorific: str  # matched honorific or ""
    start: int  # offset of the marker in the body
    text: str  # utterance text with stage directions removed
    directions: tuple[tuple[int, str], ...]  # (offset in clean text, removed span)

    @property
    def text_raw(self) -> str:
        """The exact body span following the marker (directions reinserted)."""
        out = self.text
        shift = 0
        for offset, span in self.directions:
            at = offset + shift
            out = out[:at] + span + out[at:]
            shift += len(span)
        return out


@dataclass(frozen=True)
class SegmentationResult:
    preamble: str  # body text before the first marker
    segments: tuple[Segment, ...]
    warnings: tuple[tuple[int, str], ...]


def _strip_directions(raw_span: str) -> tuple[str, tuple[tuple[int, str], ...]]:
    parts = []
    directions = []
    cursor = 0
    clean_len = 0
    for m in STAGE_DIRECTION_RE.finditer(raw_span):
        keep = raw_span[cursor : m.start()]
        parts.append(keep)
        clean_len += len(keep)
        directions.append((clean_len, m.group(0)))
        cursor = m.end()
    parts.append(raw_span[cursor:])
    return "".join(parts), tuple(directions)


def segment_utterances(body: str, rules: SegmenterRules) -> SegmentationResult:
    """Split the body at speaker markers; zero markers is a hard failure."""
    matches: list[tuple[int, int, str, str]] = []  # (start, end, name, honorific)
    taken: list[tuple[int, int]] = []
    for p in rules.marker_patterns:
        for m in re.compile(p, re.MULTILINE).finditer(body):
            span = (m.start(), m.end())
            if any(s < span[1] and span[0] < e for s, e in taken):
                continue  # an earlier (higher-priority) pattern owns this span
            taken.append(span)
            matches.append((m.start(), m.end(), m.group("name"), m.groupdict().get("honorific") or ""))
    if not matches:
        raise SegmentationFailed("no speaker marker matched; the hearing needs manual rules")
    matches.sort()
    warnings: list[tuple[int, str]] = []
    segments: list[Segment] = []
    preamble = body[: matches[0][0]]
    if preamble.strip():
        warnings.append((1, f"{len(preamble)} chars of pre-marker content kept as preamble"))
    for i, (start, end, name, honorific) in enumerate(matches):
        next_start = matches[i + 1][0] if i + 1 < len(matches) else len(body)
        raw_span = body[end:next_start]
        text, directions = _strip_directions(raw_span)
        removed = 0
        for offset, span in directions:
            warnings.append((_line_no(body, end + offset + removed), f"stripped stage direction {span!r}"))
            removed += len(span)
        segments.append(
            Segment(
                marker_raw=body[start:end],
                name_text=name,
                honorific=honorific,
                start=start,
                text=text,
                directions=directions,
            )
        )
    return SegmentationResult(preamble=preamble, segments=tuple(segments), warnings=tuple(warnings))


def reconstruct(result: SegmentationResult) -> str:
    """Reassemble the exact body from a segmentation (losslessness check)."""
    parts = [result.preamble]
    for seg in result.segments:
        parts.append(seg.marker_raw)
        parts.append(seg.text_raw)
    return "".join(parts)


def resolve_speaker(
    raw_marker: str,
    roster: Roster,
    prefer_role: Optional[Role] = None,
) -> tuple[str, Optional[str]]:
    """Look up a marker in the roster; returns (person_id or Unknown, warning).

    Ambiguous surnames try the honorific as a cue: gendered titles match the
    surname-sharing person whose honorific history fits, "Senator" filters
    to Senate members, "Dr" prefers witnesses. A remaining tie resolves to
    `prefer_role` if exactly one candidate has it, else Unknown.
    """
    marker_norm = normalize_surname(raw_marker.strip().rstrip(".").strip())
    # "Smith of Ohio" carries a state suffix, not part of the surname
    if " of " in marker_norm:
        marker_norm = marker_norm.split(" of ")[0].strip()
    # officer markers like "The Chairman": the article hides the honorific
    if marker_norm.startswith("the "):
        marker_norm = normalize_surname(marker_norm[4:])
    if not marker_norm:
        return UNKNOWN_SPEAKER, f"marker {raw_marker.strip()!r} carries no resolvable name"
    # try full normalized form first, then the last token (bare surname)
    candidates_keys = [marker_norm]
    last = marker_norm.split()[-1]
    if last != marker_norm:
        candidates_keys.append(last)
    honorific = _marker_honorific(raw_marker)
    for key in candidates_keys:
        if key in roster.name_index:
            return roster.name_index[key], None
        if key in roster.ambiguous:
            ids = roster.ambiguous[key]
            resolved = _disambiguate(ids, roster, honorific, prefer_role)
            if resolved:
                return resolved, None
            return UNKNOWN_SPEAKER, f"surname {key!r} is ambiguous among {list(ids)}"
    return UNKNOWN_SPEAKER, f"surname {marker_norm!r} not on the roster"


def _marker_honorific(raw_marker: str) -> str:
    token = raw_marker.strip().split()
    return token[0].rstrip(".").lower() if token else ""


def _disambiguate(
    ids: Sequence[str], roster: Roster, honorific: str, prefer_role: Optional[Role]
) -> Optional[str]:
    people = [roster.person(pid) for pid in ids]
    if honorific == "senator":
        from .corpus import Chamber

        hits = [p for p in people if p.role is Role.MEMBER and p.chamber is Chamber.SENATE]
        if len(hits) == 1:
            return hits[0].person_id
    if honorific in ("chairman", "chairwoman", "chairperson"):
        hits = [p for p in people if p.role is Role.MEMBER]
        if len(hits) == 1:
            return hits[0].person_id
    if honorific == "dr":
        hits = [p for p in people if p.role is Role.WITNESS]
        if len(hits) == 1:
            return hits[0].person_id
    if honorific in FEMALE_HONORIFICS or honorific in MALE_HONORIFICS:
        # honorific/gender cue: match against how the roster lists the person
        wanted_female = honorific in FEMALE_HONORIFICS
        hits = [p for p in people if _display_is_female(p.display_name) == wanted_female]
        if len(hits) == 1:
            return hits[0].person_id
    if prefer_role is not None:
        hits = [p for p in people if p.role is prefer_role]
        if len(hits) == 1:
            return hits[0].person_id
    return None


def _display_is_female(display_name: str) -> Optional[bool]:
    first = display_name.strip().split()[0].rstrip(".").lower() if display_name.strip() else ""
    if first in FEMALE_HONORIFICS:
        return True
    if first in MALE_HONORIFICS:
        return False
    return None


@dataclass(frozen=True)
class SegmentationReport:
    hearing_id: str
    n_utterances: int
    n_unresolved_speakers: int
    trimmed_head_chars: int
    trimmed_tail_chars: int
    warnings: tuple[tuple[int, str], ...]

    def __post_init__(self):
        if min(self.n_utterances, self.n_unresolved_speakers, self.trimmed_head_chars, self.trimmed_tail_chars) < 0:
            raise ValueError("report counts must be non-negative")
        if self.n_unresolved_speakers > self.n_utterances:
            raise ValueError("cannot have more unresolved speakers than utterances")


# A speaker recognizer maps (raw_marker, roster, prefer_role) to
# (person_id or Unknown, warning). The heuristic `resolve_speaker` is the
# built-in; drop-in replacements (e.g. a learned tagger) plug in here.
SpeakerRecognizer = Callable[[str, Roster, Optional[Role]], tuple[str, Optional[str]]]


def segment_hearing(
    raw: str,
    rules: SegmenterRules,
    roster: Roster,
    meta: HearingMeta,
    recognizer: Optional[SpeakerRecognizer] = None,
) -> tuple[list[Utterance], SegmentationReport]:
    """Full Task-1 pipeline for one hearing: trim, segment, resolve."""
    recognize = recognizer or (lambda marker, r, prefer: resolve_speaker(marker, r, prefer_role=prefer))
    trim = trim_proceedings(raw, rules)
    result = segment_utterances(trim.body, rules)
    warnings = list(trim.warnings)
    # segmentation warnings are body-relative; shift to raw-transcript lines
    head_lines = raw.count("\n", 0, trim.trimmed_head_chars)
    warnings.extend((line + head_lines, msg) for line, msg in result.warnings)
    utterances: list[Utterance] = []
    unresolved = 0
    prev_person_role: Optional[Role] = None
    for i, seg in enumerate(result.segments):
        prefer = Role.MEMBER if prev_person_role is Role.WITNESS else None
        person_id, warning = recognize(seg.marker_raw, roster, prefer)
        if warning:
            warnings.append((_line_no(trim.body, seg.start) + head_lines, warning))
        if person_id == UNKNOWN_SPEAKER:
            unresolved += 1
            prev_person_role = None
        else:
            prev_person_role = roster.person(person_id).role
        utterances.append(
            Utterance(
                utterance_id=f"{meta.hearing_id}-u{i:05d}",
                hearing_id=meta.hearing_id,
                sequence_no=i,
                speaker=person_id,
                raw_marker=seg.marker_raw,
                text=seg.text,
                qa_label=QALabel.UNLABELED,
            )
        )
    report = SegmentationReport(
        hearing_id=meta.hearing_id,
        n_utterances=len(utterances),
        n_unresolved_speakers=unresolved,
        trimmed_head_chars=trim.trimmed_head_chars,
        trimmed_tail_chars=trim.trimmed_tail_chars,
        warnings=tuple(warnings),
    )
    return utterances, report


@dataclass(frozen=True)
class SampleManifest:
    rows: tuple[tuple[str, str, int], ...]  # (utterance_id, hearing_id, session)
    warnings: tuple[str, ...]

    def write(self, path: Path | str) -> None:
        lines = ["utterance_id\thearing_id\tsession\tverdict"]
        lines.extend(f"{u}\t{h}\t{s}\t" for u, h, s in self.rows)
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def verify_sample(
    corpus: Sequence[tuple[HearingMeta, Sequence[Utterance]]],
    hearings_per_session: int,
    utterances_per_hearing: int,
    seed: int,
) -> SampleManifest:
    """Draw the human-verification sample: per session, a uniform draw of
    hearings, and per hearing a uniform contiguous run of utterances.

    Verdict slots are filled in by annotators with one of: correct, clubbed
    (several true utterances merged), broken (one true utterance split).
    """
    rng = random.Random(seed)
    by_session: dict[int, list[tuple[HearingMeta, Sequence[Utterance]]]] = {}
    for meta, utts in corpus:
        by_session.setdefault(meta.session, []).append((meta, utts))
    rows: list[tuple[str, str, int]] = []
    warnings: list[str] = []
    for session in sorted(by_session):
        hearings = sorted(by_session[session], key=lambda x: x[0].hearing_id)
        if len(hearings) < hearings_per_session:
            warnings.append(
                f"session {session}: only {len(hearings)} hearings available, sampling all"
            )
            chosen = hearings
        else:
            chosen = [hearings[i] for i in sorted(rng.sample(range(len(hearings)), hearings_per_session))]
        for meta, utts in chosen:
            n = len(utts)
            if n == 0:
                warnings.append(f"hearing {meta.hearing_id}: no utterances to sample")
                continue
            if n <= utterances_per_hearing:
                if n < utterances_per_hearing:
                    warnings.append(
                        f"hearing {meta.hearing_id}: only {n} utterances available, sampling all"
                    )
                window = utts
            else:
                start = rng.randrange(n - utterances_per_hearing + 1)
                window = utts[start : start + utterances_per_hearing]
            rows.extend((u.utterance_id, meta.hearing_id, session) for u in window)
    return SampleManifest(rows=tuple(rows), warnings=tuple(warnings))


VERDICTS = ("correct", "clubbed", "broken")


@dataclass(frozen=True)
class VerdictSummary:
    n_total: int
    n_correct: int
    n_clubbed: int
    n_broken: int

    @property
    def n_incorrect(self) -> int:
        return self.n_clubbed + self.n_broken

    @property
    def correctness_rate(self) -> float:
        if self.n_total == 0:
            raise ValueError("no verdicts")
        return self.n_correct / self.n_total


def score_verdicts(verdicts: Sequence[str]) -> VerdictSummary:
    counts = {v: 0 for v in VERDICTS}
    for v in verdicts:
        key = v.strip().lower()
        if key not in counts:
            raise ValueError(f"unknown verdict {v!r}; expected one of {VERDICTS}")
        counts[key] += 1
    return VerdictSummary(
        n_total=len(verdicts),
        n_correct=counts["correct"],
        n_clubbed=counts["clubbed"],
        n_broken=counts["broken"],
    )


def read_verdict_file(path: Path | str) -> list[tuple[str, str]]:
    """Rows of (utterance_id, verdict); tab-separated, header allowed."""
    path = Path(path)
    out = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if line_no == 1 and cols[0] == "utterance_id":
                continue
            if len(cols) < 2:
                raise RecordError("expected (utterance_id, verdict)", path=str(path), line_no=line_no)
            out.append((cols[0], cols[-1]))
    return out
