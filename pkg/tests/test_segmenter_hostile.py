"""Hand-built hostile transcript: edge cases the synthetic corpus never emits."""

import pytest

from gavel.corpus import Chamber, HearingMeta, Party, Person, Role, Roster
from gavel.segmenter import (
    SegmenterRules,
    reconstruct,
    segment_hearing,
    segment_utterances,
    trim_proceedings,
)

RULES = SegmenterRules()

HOSTILE = """\

                      OVERSIGHT OF EVERYTHING AT ONCE

                               HEARING
    Mentions like Mr. Chairman, appear in the head and must be trimmed.

    The committee met, pursuant to call, at 9:58 a.m., Hon. Ada Quorum
presiding.

    STATEMENT OF DR. IBRAHIM, DIRECTOR, OFFICE OF EXAMPLES

    Chairwoman QUORUM. The committee will come to order. Without
objection, the chair is authorized to declare a recess at any time. I
now recognize myself for five minutes. As Dr. Ibrahim said in 2019,
the backlog kept growing.
    [The statement of Chairwoman Quorum follows:]
    [Laughter.]
    Mr. Byte of Ohio. Thank you, Madam Chair. My constituents ask me
about this every week, and Mrs. Vector knows it.
Will the program be reauthorized before 12/31/2024?
    Dr. IBRAHIM. Senator, we believe so. We committed $4 million to
Texas and Ohio. [Pause.] The plan is on file.
    Senator Vector. I want to follow up.
    Is that commitment in writing anywhere at all?
    Dr Ibrahim. It is. I will provide it for the record.
    The CHAIRMAN. Seeing no further questions, we stand adjourned.
    [Whereupon, at 11:03 a.m., the committee was adjourned.]

                             A P P E N D I X

    Mr. Byte. This marker is in the appendix and must not be parsed.
"""


def hostile_roster():
    return Roster(
        hearing_id="hostile-1",
        people=(
            Person(person_id="chair", display_name="Ada Quorum", surname="Quorum", role=Role.MEMBER,
                   party=Party.DEMOCRAT, chamber=Chamber.HOUSE),
            Person(person_id="byte", display_name="Bo Byte", surname="Byte", role=Role.MEMBER,
                   party=Party.REPUBLICAN, chamber=Chamber.HOUSE),
            Person(person_id="vector", display_name="Mrs. Ivy Vector", surname="Vector", role=Role.MEMBER,
                   party=Party.DEMOCRAT, chamber=Chamber.SENATE),
            Person(person_id="ibrahim", display_name="Dr. Sam Ibrahim", surname="Ibrahim", role=Role.WITNESS),
        ),
    )


def test_hostile_trim_boundaries():
    result = trim_proceedings(HOSTILE, RULES)
    assert result.body.startswith("    The committee met, pursuant to call")
    assert result.body.rstrip().endswith("the committee was adjourned.]")
    # the appendix marker never reaches the segmenter
    assert "appendix and must not be parsed" not in result.body


def test_hostile_segmentation_markers():
    body = trim_proceedings(HOSTILE, RULES).body
    result = segment_utterances(body, RULES)
    names = [s.name_text for s in result.segments]
    assert names == ["QUORUM", "Byte", "IBRAHIM", "Vector", "Ibrahim", "The CHAIRMAN"]
    # the anchor line and the all-caps statement header stay in the preamble
    assert "STATEMENT OF DR. IBRAHIM" in result.preamble
    assert reconstruct(result) == body


def test_hostile_markers_not_opened_midline():
    body = trim_proceedings(HOSTILE, RULES).body
    result = segment_utterances(body, RULES)
    quorum = result.segments[0]
    # "Dr. Ibrahim said" (mid-sentence, line-wrapped) must not split
    assert "Dr. Ibrahim said in 2019" in quorum.text
    byte = result.segments[1]
    # "Mrs. Vector knows it." ends a line but is not at a line start
    assert "Mrs. Vector knows it." in byte.text
    # the wrapped question line stays inside the same utterance
    assert "reauthorized before 12/31/2024?" in byte.text


def test_hostile_multiline_direction_and_sequence():
    body = trim_proceedings(HOSTILE, RULES).body
    result = segment_utterances(body, RULES)
    quorum = result.segments[0]
    stripped = [d for _, d in quorum.directions]
    assert "[The statement of Chairwoman Quorum follows:]" in stripped
    assert "[Laughter.]" in stripped
    ibrahim = result.segments[2]
    assert "[Pause.]" in [d for _, d in ibrahim.directions]
    assert "[Pause.]" not in ibrahim.text


def test_hostile_speaker_resolution():
    meta = HearingMeta(hearing_id="hostile-1", session=116, chamber=Chamber.HOUSE, committee="Oversight")
    utterances, report = segment_hearing(HOSTILE, RULES, hostile_roster(), meta)
    speakers = [u.speaker for u in utterances]
    # "The CHAIRMAN." carries no surname: Unknown, counted and warned
    assert speakers == ["chair", "byte", "ibrahim", "vector", "ibrahim", "Unknown"]
    assert report.n_unresolved_speakers == 1
    assert any("no resolvable name" in msg for _, msg in report.warnings)
    assert [u.sequence_no for u in utterances] == list(range(6))


def test_hostile_honorific_without_period():
    # "Dr Ibrahim." (no period after the honorific) still matches
    body = trim_proceedings(HOSTILE, RULES).body
    result = segment_utterances(body, RULES)
    assert result.segments[4].marker_raw.strip() == "Dr Ibrahim."
