"""Shared vocabulary: semantic role tags and ISO 29148 syntactic roles.

Everything downstream (corpus ingestion, template induction, the recommender,
the samplers) speaks in these two alphabets, so they live in one place.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

# Modal verbs recognized between a subject span and the predicate.
MODAL_WORDS = ("shall", "must", "will", "should", "may", "can")

_CANONICAL = ("REL", "ARG0", "ARG1", "ARG2", "ARGM-PRP", "ARGM-TMP", "ARGM-LOC", "ARGM-BNF")

# Bracket-display spelling used when rendering templates and variants.
_DISPLAY = {
    "REL": "V",
    "ARG0": "Arg0",
    "ARG1": "Arg1",
    "ARG2": "Arg2",
    "ARGM-PRP": "ArgM-PRP",
    "ARGM-TMP": "ArgM-TMP",
    "ARGM-LOC": "ArgM-LOC",
    "ARGM-BNF": "ArgM-BNF",
}

# Annotation surface form written to JSON. The predicate renders as "V",
# which is how PropBank-style tools emit it.
_SURFACE = {name: ("V" if name == "REL" else name) for name in _CANONICAL}


@dataclass(frozen=True)
class SrlTag:
    """One semantic role label.

    ``name`` is one of the eight canonical names or "OTHER"; ``label`` keeps
    the original surface string only for OTHER tags so parsing round-trips.
    """

    name: str
    label: str | None = None

    @property
    def is_other(self) -> bool:
        return self.name == "OTHER"

    def render(self) -> str:
        """Annotation surface form ("V", "ARG0", ..., or the preserved label)."""
        if self.is_other:
            return self.label if self.label is not None else "OTHER"
        return _SURFACE[self.name]

    @property
    def display(self) -> str:
        """Bracket-display spelling ("V", "Arg0", "ArgM-BNF", ...)."""
        if self.is_other:
            return self.label if self.label is not None else "OTHER"
        return _DISPLAY[self.name]

    def __str__(self) -> str:
        return self.render()


def _build_alias_table() -> dict[str, SrlTag]:
    table: dict[str, SrlTag] = {}
    for name in _CANONICAL:
        tag = SrlTag(name)
        aliases = {name, name.replace("-", "_")}
        if name == "REL":
            aliases.update({"V", "REL"})
        for alias in aliases:
            table[alias.upper()] = tag
    return table


_ALIASES = _build_alias_table()

REL = _ALIASES["REL"]
ARG0 = _ALIASES["ARG0"]
ARG1 = _ALIASES["ARG1"]
ARG2 = _ALIASES["ARG2"]
ARGM_PRP = _ALIASES["ARGM-PRP"]
ARGM_TMP = _ALIASES["ARGM-TMP"]
ARGM_LOC = _ALIASES["ARGM-LOC"]
ARGM_BNF = _ALIASES["ARGM-BNF"]

# Tie-break precedence for tag predictions: predicate first, then arguments.
TABLE_ORDER = (REL, ARG0, ARG1, ARG2, ARGM_PRP, ARGM_TMP, ARGM_LOC, ARGM_BNF)

_ORDER_INDEX = {tag: i for i, tag in enumerate(TABLE_ORDER)}


def parse_tag(text: str) -> SrlTag:
    """Map an annotation label to a tag; unknown labels become OTHER verbatim."""
    tag = _ALIASES.get(text.strip().upper())
    if tag is not None:
        return tag
    return SrlTag("OTHER", label=text)


def tag_order(tag: SrlTag) -> int:
    """Precedence index into TABLE_ORDER; OTHER tags sort last."""
    return _ORDER_INDEX.get(tag, len(TABLE_ORDER))


class IsoRole(IntEnum):
    """ISO 29148 sentence-part numerals used in feature token lists."""

    CONDITION = 0
    SUBJECT = 1
    ACTION = 2
    OBJECT = 3
    CONSTRAINT = 4


# Core role-to-tag mapping used by the rule fallback (SUBJECT is remapped to
# ARG1 under a subject-verb template; CONSTRAINT goes through a keyword
# heuristic instead).
ROLE_TO_TAG = {
    IsoRole.SUBJECT: ARG0,
    IsoRole.ACTION: REL,
    IsoRole.OBJECT: ARG1,
    IsoRole.CONDITION: ARG2,
}

# Inverse mapping for turning annotated spans back into role-labelled tokens.
# ARG2 maps to CONDITION when it is the leading span of its requirement and
# CONSTRAINT otherwise; callers pass ``leading`` accordingly.
def tag_to_role(tag: SrlTag, leading: bool = True) -> IsoRole:
    if tag == REL:
        return IsoRole.ACTION
    if tag == ARG0:
        return IsoRole.SUBJECT
    if tag == ARG1:
        return IsoRole.OBJECT
    if tag == ARG2:
        return IsoRole.CONDITION if leading else IsoRole.CONSTRAINT
    return IsoRole.CONSTRAINT
