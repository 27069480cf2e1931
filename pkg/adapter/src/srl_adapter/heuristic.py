"""Deterministic rule-based role annotator for modal requirement sentences.

The heuristic targets the shape requirements prose overwhelmingly takes:
an optional comma-terminated condition clause, a subject, a modal, a
predicate, an object, and trailing modifier phrases introduced by marker
words. It needs no external model, so it is always available and fully
reproducible; sentences without a modal yield no frame.
"""
from __future__ import annotations

from .tokenizer import tokenize

MODALS = {"shall", "must", "will", "should", "may", "can", "might", "would"}
CONDITION_LEADS = {"if", "when", "while", "unless", "until", "once"}
TEMPORAL_MARKERS = {"within", "before", "after", "during", "while", "until"}
LOCATIVE_MARKERS = {"at", "in", "on"}
SENTENCE_FINAL = {".", "!", "?"}


def _modifier_tag(word: str) -> str | None:
    if word == "to":
        return "ARGM-PRP"
    if word in TEMPORAL_MARKERS:
        return "ARGM-TMP"
    if word in LOCATIVE_MARKERS:
        return "ARGM-LOC"
    if word == "for":
        return "ARGM-BNF"
    return None


def annotate_tokens(tokens: list[str]) -> list[dict]:
    """Return zero or one frame for a tokenized requirement sentence."""
    lower = [t.lower() for t in tokens]
    end = len(tokens)
    while end > 0 and tokens[end - 1] in SENTENCE_FINAL:
        end -= 1
    if end == 0:
        return []

    spans: list[dict] = []
    start = 0
    if lower[0] in CONDITION_LEADS and "," in tokens[:end]:
        comma = tokens.index(",")
        if comma < end - 1:
            spans.append({"start": 0, "end": comma, "tag": "ARG2"})
            start = comma + 1

    modal = next((i for i in range(start, end) if lower[i] in MODALS), None)
    if modal is None or modal + 1 >= end:
        return []
    passive = lower[modal + 1] in {"be", "being"}
    predicate = modal + 2 if passive else modal + 1
    if predicate >= end:
        return []
    if modal > start:
        spans.append({"start": start, "end": modal,
                      "tag": "ARG1" if passive else "ARG0"})
    spans.append({"start": predicate, "end": predicate + 1, "tag": "V"})

    boundaries = [(i, _modifier_tag(lower[i]))
                  for i in range(predicate + 1, end)
                  if _modifier_tag(lower[i]) is not None and i + 1 < end]
    points = boundaries + [(end, None)]
    first_limit = points[0][0]
    if first_limit > predicate + 1:
        spans.append({"start": predicate + 1, "end": first_limit, "tag": "ARG1"})
    for (marker, tag), (next_marker, _) in zip(points, points[1:]):
        spans.append({"start": marker, "end": next_marker, "tag": tag})

    spans.sort(key=lambda s: s["start"])
    return [{"predicate_index": predicate, "spans": spans}]


def annotate_line(text: str) -> tuple[list[str], list[dict]]:
    tokens = tokenize(text)
    return tokens, annotate_tokens(tokens)
