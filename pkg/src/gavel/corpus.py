"""Domain types and the on-disk corpus store.

A corpus lives under a root directory with one subdirectory per hearing:

    <root>/<hearing_id>/meta.json        hearing metadata, single JSON object
    <root>/<hearing_id>/utterances.jsonl one utterance record per line
    <root>/<hearing_id>/roster.json      people present at the hearing (optional)

All types are immutable after construction and safe to share across threads.
Store handles are single-writer/multi-reader: `store_corpus` replaces whole
hearing directories, readers only ever see complete files.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence


class Chamber(str, Enum):
    HOUSE = "House"
    SENATE = "Senate"
    JOINT = "Joint"


class HearingType(str, Enum):
    GENERAL = "General"
    FIELD = "Field"
    OVERSIGHT = "Oversight"
    AUTHORIZATION = "Authorization"
    NOMINATION = "Nomination"
    TREATY = "Treaty"
    MARKUP = "Markup"


class Role(str, Enum):
    MEMBER = "Member"
    WITNESS = "Witness"
    UNKNOWN = "Unknown"


class Party(str, Enum):
    DEMOCRAT = "Democrat"
    REPUBLICAN = "Republican"
    INDEPENDENT = "Independent"
    NONE = "None"


class Standing(str, Enum):
    MAJORITY = "Majority"
    MINORITY = "Minority"
    NOT_APPLICABLE = "NotApplicable"


class QALabel(str, Enum):
    QUESTION = "Question"
    ANSWER = "Answer"
    OTHER = "Other"
    UNLABELED = "Unlabeled"


UNKNOWN_SPEAKER = "Unknown"

# Titles stripped during surname normalization. "The Honorable" is two tokens
# and must be removed before single-token titles.
HONORIFICS = (
    "the honorable",
    "mr",
    "mrs",
    "ms",
    "dr",
    "senator",
    "chairman",
    "chairwoman",
    "chair",
)

_ID_RE = re.compile(r"^[A-Za-z0-9._\-]+$")


class CorpusError(Exception):
    """Base class for corpus-store failures."""


class InvariantError(CorpusError):
    """A domain-type invariant does not hold."""


class RecordError(CorpusError):
    """A stored record could not be parsed.

    Carries enough context to locate the offending record by hand.
    """

    def __init__(self, message: str, *, path: str = "", line_no: int = 0, field_name: str = ""):
        self.path = path
        self.line_no = line_no
        self.field_name = field_name
        where = path
        if line_no:
            where += f":{line_no}"
        if field_name:
            where += f" field '{field_name}'"
        super().__init__(f"{message} ({where})" if where else message)


def normalize_surname(name: str) -> str:
    """Lowercase a speaker name and strip punctuation and leading honorifics.

    Idempotent: normalizing a normalized name is a no-op.
    """
    s = name.lower().replace(".", " ").replace(",", " ")
    s = " ".join(s.split())
    changed = True
    while changed:
        changed = False
        for hon in HONORIFICS:
            if s == hon:
                return ""
            if s.startswith(hon + " "):
                s = s[len(hon) + 1 :]
                changed = True
    return s


@dataclass(frozen=True)
class HearingMeta:
    hearing_id: str
    session: int
    chamber: Chamber
    committee: str
    hearing_type: HearingType = HearingType.GENERAL
    date: Optional[str] = None  # ISO-8601 date

    def __post_init__(self):
        if not self.hearing_id or not _ID_RE.match(self.hearing_id):
            raise InvariantError(f"hearing_id must be a non-empty identifier, got {self.hearing_id!r}")

    def to_record(self) -> dict:
        return {
            "hearing_id": self.hearing_id,
            "session": self.session,
            "chamber": self.chamber.value,
            "committee": self.committee,
            "hearing_type": self.hearing_type.value,
            "date": self.date,
        }

    @classmethod
    def from_record(cls, rec: Mapping, *, path: str = "", line_no: int = 0) -> "HearingMeta":
        try:
            chamber = Chamber(rec["chamber"])
        except ValueError:
            raise RecordError(f"unknown chamber {rec.get('chamber')!r}", path=path, line_no=line_no, field_name="chamber")
        except KeyError:
            raise RecordError("missing field", path=path, line_no=line_no, field_name="chamber")
        # hearing_type defaults to General when absent from metadata
        raw_type = rec.get("hearing_type") or HearingType.GENERAL.value
        try:
            hearing_type = HearingType(raw_type)
        except ValueError:
            raise RecordError(
                f"unknown hearing_type {raw_type!r}", path=path, line_no=line_no, field_name="hearing_type"
            )
        try:
            return cls(
                hearing_id=rec["hearing_id"],
                session=int(rec["session"]),
                chamber=chamber,
                committee=rec["committee"],
                hearing_type=hearing_type,
                date=rec.get("date"),
            )
        except KeyError as exc:
            raise RecordError("missing field", path=path, line_no=line_no, field_name=str(exc.args[0]))


@dataclass(frozen=True)
class Person:
    person_id: str
    display_name: str
    surname: str
    role: Role
    party: Party = Party.NONE
    chamber: Optional[Chamber] = None
    standing: Standing = Standing.NOT_APPLICABLE

    def __post_init__(self):
        if self.role is Role.WITNESS:
            if self.party is not Party.NONE or self.standing is not Standing.NOT_APPLICABLE:
                raise InvariantError(f"witness {self.person_id} must have party=None and standing=NotApplicable")
        if self.role is Role.MEMBER and self.party not in (
            Party.DEMOCRAT,
            Party.REPUBLICAN,
            Party.INDEPENDENT,
        ):
            raise InvariantError(f"member {self.person_id} must have a party affiliation")

    def to_record(self) -> dict:
        return {
            "person_id": self.person_id,
            "display_name": self.display_name,
            "surname": self.surname,
            "role": self.role.value,
            "party": self.party.value,
            "chamber": self.chamber.value if self.chamber else None,
            "standing": self.standing.value,
        }

    @classmethod
    def from_record(cls, rec: Mapping, *, path: str = "", line_no: int = 0) -> "Person":
        try:
            return cls(
                person_id=rec["person_id"],
                display_name=rec["display_name"],
                surname=rec["surname"],
                role=Role(rec["role"]),
                party=Party(rec.get("party", "None")),
                chamber=Chamber(rec["chamber"]) if rec.get("chamber") else None,
                standing=Standing(rec.get("standing", "NotApplicable")),
            )
        except KeyError as exc:
            raise RecordError("missing field", path=path, line_no=line_no, field_name=str(exc.args[0]))
        except ValueError as exc:
            raise RecordError(str(exc), path=path, line_no=line_no, field_name="role/party/chamber/standing")


@dataclass(frozen=True)
class Roster:
    """People present at one hearing, indexed by normalized surname.

    `name_index` maps each surname that identifies exactly one person to that
    person_id; surnames shared by several people go to `ambiguous` and need a
    context cue to resolve (see segmenter.resolve_speaker).
    """

    hearing_id: str
    people: tuple[Person, ...]
    name_index: Mapping[str, str] = field(init=False)
    ambiguous: Mapping[str, tuple[str, ...]] = field(init=False)

    def __post_init__(self):
        by_surname: dict[str, list[str]] = {}
        for p in self.people:
            key = normalize_surname(p.surname)
            if key:
                by_surname.setdefault(key, []).append(p.person_id)
        unique = {k: v[0] for k, v in by_surname.items() if len(v) == 1}
        dupes = {k: tuple(v) for k, v in by_surname.items() if len(v) > 1}
        object.__setattr__(self, "name_index", unique)
        object.__setattr__(self, "ambiguous", dupes)

    def person(self, person_id: str) -> Person:
        for p in self.people:
            if p.person_id == person_id:
                return p
        raise KeyError(person_id)

    def to_record(self) -> dict:
        return {"hearing_id": self.hearing_id, "people": [p.to_record() for p in self.people]}

    @classmethod
    def from_record(cls, rec: Mapping, *, path: str = "") -> "Roster":
        people = tuple(Person.from_record(r, path=path) for r in rec.get("people", []))
        return cls(hearing_id=rec.get("hearing_id", ""), people=people)


@dataclass(frozen=True)
class Utterance:
    utterance_id: str
    hearing_id: str
    sequence_no: int
    speaker: str  # person_id or "Unknown"
    raw_marker: str
    text: str
    qa_label: QALabel = QALabel.UNLABELED

    def __post_init__(self):
        if self.sequence_no < 0:
            raise InvariantError(f"utterance {self.utterance_id}: sequence_no must be >= 0")

    def to_record(self) -> dict:
        return {
            "utterance_id": self.utterance_id,
            "hearing_id": self.hearing_id,
            "sequence_no": self.sequence_no,
            "speaker": self.speaker,
            "raw_marker": self.raw_marker,
            "text": self.text,
            "qa_label": self.qa_label.value,
        }

    @classmethod
    def from_record(cls, rec: Mapping, *, path: str = "", line_no: int = 0) -> "Utterance":
        try:
            label = QALabel(rec.get("qa_label", "Unlabeled"))
        except ValueError:
            raise RecordError(
                f"unknown qa_label {rec.get('qa_label')!r}", path=path, line_no=line_no, field_name="qa_label"
            )
        try:
            return cls(
                utterance_id=rec["utterance_id"],
                hearing_id=rec["hearing_id"],
                sequence_no=int(rec["sequence_no"]),
                speaker=rec["speaker"],
                raw_marker=rec["raw_marker"],
                text=rec["text"],
                qa_label=label,
            )
        except KeyError as exc:
            raise RecordError("missing field", path=path, line_no=line_no, field_name=str(exc.args[0]))


@dataclass(frozen=True)
class QAPair:
    pair_id: str
    question_utterance_id: str
    answer_utterance_id: str
    questioner: str
    answerer: str

    def to_record(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "question_utterance_id": self.question_utterance_id,
            "answer_utterance_id": self.answer_utterance_id,
            "questioner": self.questioner,
            "answerer": self.answerer,
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "QAPair":
        return cls(
            pair_id=rec["pair_id"],
            question_utterance_id=rec["question_utterance_id"],
            answer_utterance_id=rec["answer_utterance_id"],
            questioner=rec["questioner"],
            answerer=rec["answerer"],
        )


@dataclass(frozen=True)
class GovernmentContext:
    """Who controlled the presidency and each chamber during one session."""

    session: int
    president_party: Party
    house_majority: Party
    senate_majority: Party
    unified: bool = None  # type: ignore[assignment]  # derived when omitted

    def __post_init__(self):
        derived = self.president_party == self.house_majority == self.senate_majority
        if self.unified is None:
            object.__setattr__(self, "unified", derived)
        elif self.unified != derived:
            raise InvariantError(
                f"session {self.session}: unified={self.unified} contradicts party control "
                f"(president={self.president_party.value}, house={self.house_majority.value}, "
                f"senate={self.senate_majority.value})"
            )

    def majority_of(self, chamber: Chamber) -> Party:
        if chamber is Chamber.HOUSE:
            return self.house_majority
        if chamber is Chamber.SENATE:
            return self.senate_majority
        raise ValueError("Joint hearings have no single majority party; resolve the member's own chamber")

    def to_record(self) -> dict:
        return {
            "session": self.session,
            "president_party": self.president_party.value,
            "house_majority": self.house_majority.value,
            "senate_majority": self.senate_majority.value,
            "unified": self.unified,
        }

    @classmethod
    def from_record(cls, rec: Mapping, *, path: str = "", line_no: int = 0) -> "GovernmentContext":
        try:
            return cls(
                session=int(rec["session"]),
                president_party=Party(rec["president_party"]),
                house_majority=Party(rec["house_majority"]),
                senate_majority=Party(rec["senate_majority"]),
                unified=rec.get("unified"),
            )
        except KeyError as exc:
            raise RecordError("missing field", path=path, line_no=line_no, field_name=str(exc.args[0]))


def load_government_config(path: Path | str) -> dict[int, GovernmentContext]:
    """Load the per-session government-control config (a JSON array)."""
    path = Path(path)
    try:
        records = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise RecordError(f"invalid JSON: {exc}", path=str(path))
    out: dict[int, GovernmentContext] = {}
    for i, rec in enumerate(records):
        ctx = GovernmentContext.from_record(rec, path=str(path), line_no=i + 1)
        out[ctx.session] = ctx
    return out


def derive_standing(
    person: Person,
    meta: HearingMeta,
    ctx: GovernmentContext,
    caucus_overrides: Mapping[str, Party] | None = None,
) -> Standing:
    """Majority/minority standing of a member at a given hearing.

    Independents count as Minority unless a caucus override maps them onto
    the chamber's majority party. Joint hearings fall back to the member's
    own chamber; without one the standing is undecidable.
    """
    if person.role is not Role.MEMBER:
        raise InvariantError(f"standing is defined for members only, got role={person.role.value}")
    if ctx.session != meta.session:
        raise InvariantError(f"context session {ctx.session} does not match hearing session {meta.session}")
    chamber = meta.chamber
    if chamber is Chamber.JOINT:
        if person.chamber is None or person.chamber is Chamber.JOINT:
            raise InvariantError(f"cannot derive standing for {person.person_id} in a Joint hearing without a chamber")
        chamber = person.chamber
    effective_party = person.party
    if caucus_overrides and person.person_id in caucus_overrides:
        effective_party = caucus_overrides[person.person_id]
    majority = ctx.majority_of(chamber)
    return Standing.MAJORITY if effective_party == majority else Standing.MINORITY


def _check_sequence(hearing_id: str, utterances: Sequence[Utterance]) -> None:
    for i, utt in enumerate(utterances):
        if utt.hearing_id != hearing_id:
            raise InvariantError(f"utterance {utt.utterance_id} belongs to {utt.hearing_id}, not {hearing_id}")
        if utt.sequence_no != i:
            raise InvariantError(
                f"utterance {utt.utterance_id}: sequence_no {utt.sequence_no} breaks the 0..n-1 order at position {i}"
            )


def store_corpus(
    transcripts: Iterable[tuple[HearingMeta, Sequence[Utterance]]],
    path: Path | str,
    rosters: Mapping[str, Roster] | None = None,
) -> None:
    """Write hearings to the store layout, validating invariants first."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    seen: set[str] = set()
    for meta, utterances in transcripts:
        if meta.hearing_id in seen:
            raise InvariantError(f"duplicate hearing_id {meta.hearing_id}")
        seen.add(meta.hearing_id)
        _check_sequence(meta.hearing_id, utterances)
        hdir = root / meta.hearing_id
        hdir.mkdir(parents=True, exist_ok=True)
        (hdir / "meta.json").write_text(json.dumps(meta.to_record(), indent=1) + "\n", encoding="utf-8")
        with open(hdir / "utterances.jsonl", "w", encoding="utf-8") as fh:
            for utt in utterances:
                fh.write(json.dumps(utt.to_record(), ensure_ascii=False) + "\n")
        if rosters and meta.hearing_id in rosters:
            roster = rosters[meta.hearing_id]
            (hdir / "roster.json").write_text(
                json.dumps(roster.to_record(), ensure_ascii=False, indent=1) + "\n", encoding="utf-8"
            )


def load_corpus(path: Path | str) -> list[tuple[HearingMeta, list[Utterance]]]:
    """Read back every hearing under `path`, ordered by hearing_id then sequence_no."""
    root = Path(path)
    if not root.is_dir():
        raise CorpusError(f"corpus root {root} is not a directory")
    out: list[tuple[HearingMeta, list[Utterance]]] = []
    for hdir in sorted(p for p in root.iterdir() if p.is_dir()):
        meta_path = hdir / "meta.json"
        if not meta_path.is_file():
            continue  # not a hearing directory
        try:
            meta_rec = json.loads(meta_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise RecordError(f"invalid JSON: {exc}", path=str(meta_path))
        meta = HearingMeta.from_record(meta_rec, path=str(meta_path))
        utterances = list(load_utterances(hdir / "utterances.jsonl"))
        _check_sequence(meta.hearing_id, utterances)
        out.append((meta, utterances))
    return out


def load_utterances(path: Path | str) -> list[Utterance]:
    path = Path(path)
    out = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordError(f"malformed record: {exc}", path=str(path), line_no=line_no)
            out.append(Utterance.from_record(rec, path=str(path), line_no=line_no))
    out.sort(key=lambda u: u.sequence_no)
    return out


def load_roster(path: Path | str) -> Roster:
    path = Path(path)
    try:
        rec = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise RecordError(f"invalid JSON: {exc}", path=str(path))
    return Roster.from_record(rec, path=str(path))


def load_rosters(corpus_root: Path | str) -> dict[str, Roster]:
    root = Path(corpus_root)
    out = {}
    for hdir in sorted(p for p in root.iterdir() if p.is_dir()):
        rpath = hdir / "roster.json"
        if rpath.is_file():
            roster = load_roster(rpath)
            out[roster.hearing_id or hdir.name] = roster
    return out
