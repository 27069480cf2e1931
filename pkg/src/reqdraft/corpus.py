"""Annotated corpus handling: ingestion, hygiene filtering, sequence extraction.

The canonical interchange format is a JSON document::

    {"requirements": [{"id": ..., "text": ..., "tokens": [...],
                       "frames": [{"predicate_index": ..., "spans":
                                   [{"start": ..., "end": ..., "tag": ...}]}]}]}

Span indices are token offsets, start inclusive and end exclusive. Each
requirement keeps exactly one frame after ingestion: the frame with the most
spans, ties broken by the earliest predicate.
"""
from __future__ import annotations

import json
import re
import string
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusError, ExtractionError, InputError
from .tags import ARG1, MODAL_WORDS, REL, SrlTag, parse_tag

# Trailing-word stop list for the sentence splitter: a boundary candidate is
# rejected when the word ending at the punctuation is one of these.
ABBREVIATIONS = frozenset({"e.g.", "i.e.", "etc.", "vs.", "no.", "fig."})

_PUNCT = set(string.punctuation)

_BOUNDARY = re.compile(r"[.!?]+\s+(?=[A-Z])")


def split_sentences(text: str) -> list[str]:
    """Split on sentence-ending punctuation followed by an uppercase letter.

    Deterministic and intentionally simple; the abbreviation stop list covers
    the forms that show up in requirements documents.
    """
    sentences = []
    start = 0
    for match in _BOUNDARY.finditer(text):
        prefix = text[start:match.end()]
        last_word = prefix.split()[-1] if prefix.split() else ""
        if last_word.lower() in ABBREVIATIONS:
            continue
        sentence = text[start:match.end()].strip()
        if sentence:
            sentences.append(sentence)
        start = match.end()
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize_words(text: str) -> list[str]:
    """Whitespace tokenization with edge punctuation split off as own tokens."""
    tokens: list[str] = []
    for chunk in text.split():
        leading: list[str] = []
        trailing: list[str] = []
        while chunk and chunk[0] in _PUNCT:
            leading.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _PUNCT:
            trailing.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(leading)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(trailing))
    return tokens


@dataclass(frozen=True)
class Span:
    """A tagged token range, start inclusive, end exclusive."""

    start: int
    end: int
    tag: SrlTag

    def text(self, tokens: list[str]) -> str:
        return " ".join(tokens[self.start:self.end])


@dataclass(frozen=True)
class AnnotatedRequirement:
    id: str
    text: str
    tokens: tuple[str, ...]
    spans: tuple[Span, ...]

    def word_count(self) -> int:
        """Tokens containing at least one alphanumeric character."""
        return sum(1 for t in self.tokens if any(c.isalnum() for c in t))


@dataclass(frozen=True)
class TagSequence:
    """Ordered span tags of one requirement plus its observed modal, if any."""

    tags: tuple[SrlTag, ...]
    modal: str | None = None

    def display(self) -> str:
        """Bracketed-slot rendering, e.g. ``[Arg0]shall[V][Arg1]``."""
        parts = []
        modal_pending = self.modal
        for tag in self.tags:
            if modal_pending is not None and tag == REL:
                parts.append(modal_pending)
                modal_pending = None
            parts.append(f"[{tag.display}]")
        return "".join(parts)


@dataclass
class IngestResult:
    requirements: list[AnnotatedRequirement]
    skipped: list[tuple[str, str]] = field(default_factory=list)


def _best_frame(frames: list) -> dict:
    return min(frames, key=lambda f: (-len(f.get("spans", [])), f.get("predicate_index", 0)))


def _record_to_requirement(record: dict) -> AnnotatedRequirement:
    """Validate one record; raises InputError with a reason on violation."""
    if not isinstance(record, dict):
        raise InputError("record is not an object")
    rid = record.get("id")
    if not isinstance(rid, str) or not rid:
        raise InputError("missing or non-string id")
    text = record.get("text")
    if not isinstance(text, str):
        raise InputError("missing or non-string text")
    tokens = record.get("tokens")
    if not isinstance(tokens, list) or not tokens or not all(isinstance(t, str) for t in tokens):
        raise InputError("tokens must be a non-empty list of strings")
    frames = record.get("frames")
    if not isinstance(frames, list):
        raise InputError("frames must be a list")
    for frame in frames:
        if not isinstance(frame, dict) or not isinstance(frame.get("spans"), list):
            raise InputError("frame without a spans list")
        pred = frame.get("predicate_index")
        if not isinstance(pred, int) or not 0 <= pred < len(tokens):
            raise InputError("predicate_index out of token range")
    spans: list[Span] = []
    if frames:
        for raw in _best_frame(frames)["spans"]:
            if not isinstance(raw, dict):
                raise InputError("span is not an object")
            start, end, tag = raw.get("start"), raw.get("end"), raw.get("tag")
            if not isinstance(start, int) or not isinstance(end, int):
                raise InputError("span indices must be integers")
            if not 0 <= start < end <= len(tokens):
                raise InputError(f"span [{start}, {end}) outside token range 0..{len(tokens)}")
            if not isinstance(tag, str):
                raise InputError("span tag must be a string")
            spans.append(Span(start, end, parse_tag(tag)))
    spans.sort(key=lambda s: (s.start, s.end))
    for prev, cur in zip(spans, spans[1:]):
        if cur.start < prev.end:
            raise InputError(f"overlapping spans at token {cur.start}")
    return AnnotatedRequirement(id=rid, text=text, tokens=tuple(tokens), spans=tuple(spans))


def ingest_annotations(path: str | Path) -> IngestResult:
    """Load a canonical annotation file.

    Per-record violations are skipped and reported with the record id (or its
    ordinal when the id itself is unusable); a file with zero valid records is
    an error.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or not isinstance(payload.get("requirements"), list):
        raise InputError(f"{path} lacks a top-level 'requirements' list")

    result = IngestResult(requirements=[])
    seen: set[str] = set()
    for ordinal, record in enumerate(payload["requirements"]):
        label = record.get("id") if isinstance(record, dict) and isinstance(record.get("id"), str) else f"record #{ordinal}"
        try:
            requirement = _record_to_requirement(record)
        except InputError as exc:
            result.skipped.append((label, str(exc)))
            continue
        if requirement.id in seen:
            result.skipped.append((requirement.id, "duplicate id"))
            continue
        seen.add(requirement.id)
        result.requirements.append(requirement)
    if not result.requirements:
        raise CorpusError(f"{path} yielded zero valid records")
    return result


def to_payload(requirements: list[AnnotatedRequirement]) -> dict:
    """Serialize back to the canonical format (one frame per requirement)."""
    records = []
    for req in requirements:
        predicate_index = next((s.start for s in req.spans if s.tag == REL), 0)
        records.append(
            {
                "id": req.id,
                "text": req.text,
                "tokens": list(req.tokens),
                "frames": [
                    {
                        "predicate_index": predicate_index,
                        "spans": [
                            {"start": s.start, "end": s.end, "tag": s.tag.render()}
                            for s in req.spans
                        ],
                    }
                ],
            }
        )
    return {"requirements": records}


def write_annotations(requirements: list[AnnotatedRequirement], path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(to_payload(requirements), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def annotation_schema() -> dict:
    """The canonical annotation JSON Schema shipped with the package."""
    schema_path = Path(__file__).with_name("annotation.schema.json")
    return json.loads(schema_path.read_text(encoding="utf-8"))


@dataclass(frozen=True)
class FilterPolicy:
    """Hygiene rules applied before template work.

    min_words: drop records with fewer alphanumeric words.
    drop_multi_sentence: drop records that split into more than one sentence.
    drop_verb_object: drop bare verb-object records ([V][Arg1] with no subject).
    drop_single_span: drop records with fewer than two spans, which could not
        yield a usable sequence anyway.
    """

    min_words: int = 4
    drop_multi_sentence: bool = True
    drop_verb_object: bool = True
    drop_single_span: bool = True


@dataclass
class FilterResult:
    kept: list[AnnotatedRequirement]
    dropped: list[tuple[str, str]] = field(default_factory=list)


def filter_corpus(requirements: list[AnnotatedRequirement],
                  policy: FilterPolicy | None = None) -> FilterResult:
    policy = policy or FilterPolicy()
    result = FilterResult(kept=[])
    for req in requirements:
        if policy.drop_multi_sentence and len(split_sentences(req.text)) > 1:
            result.dropped.append((req.id, "multi-sentence"))
            continue
        tags = [s.tag for s in req.spans]
        if policy.drop_verb_object and tags == [REL, ARG1]:
            result.dropped.append((req.id, "verb-object"))
            continue
        if req.word_count() < policy.min_words:
            result.dropped.append((req.id, "too-short"))
            continue
        if policy.drop_single_span and len(req.spans) < 2:
            result.dropped.append((req.id, "single-span"))
            continue
        result.kept.append(req)
    return result


def extract_tag_sequence(requirement: AnnotatedRequirement) -> TagSequence:
    """Span tags in order plus the modal observed before the predicate.

    The modal is the first recognized modal verb in the token gap between the
    span immediately preceding the predicate and the predicate span itself.
    """
    if not requirement.spans:
        raise ExtractionError(f"requirement {requirement.id} has no annotated spans")
    tags = tuple(span.tag for span in requirement.spans)
    modal = None
    rel_index = next((i for i, t in enumerate(tags) if t == REL), None)
    if rel_index is not None and rel_index > 0:
        gap_start = requirement.spans[rel_index - 1].end
        gap_end = requirement.spans[rel_index].start
        for token in requirement.tokens[gap_start:gap_end]:
            if token.lower() in MODAL_WORDS:
                modal = token
                break
    return TagSequence(tags=tags, modal=modal)
