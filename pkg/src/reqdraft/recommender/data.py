"""Training instances: JSONL serialization and reverse engineering.

Reverse engineering turns annotated requirements back into the sparse feature
tokens a requester would plausibly have typed: a few spans sampled from each
requirement, role-labelled through the inverse tag-to-role mapping, with the
full requirement's template and span tags kept as gold labels.
"""
from __future__ import annotations

import json
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..corpus import AnnotatedRequirement, extract_tag_sequence
from ..errors import ExtractionError, InputError
from ..tags import IsoRole, SrlTag, parse_tag, tag_to_role
from ..templates import VariableTemplate, matches, normalize_modals
from .features import FeatureToken

MIN_TOKENS = 2
MAX_TOKENS = 5


@dataclass(frozen=True)
class TrainingInstance:
    tokens: tuple[FeatureToken, ...]
    template_id: int
    tags: tuple[SrlTag, ...]

    def __post_init__(self) -> None:
        if not MIN_TOKENS <= len(self.tokens) <= MAX_TOKENS:
            raise InputError(
                f"training instance needs {MIN_TOKENS}-{MAX_TOKENS} tokens, got {len(self.tokens)}")
        if len(self.tokens) != len(self.tags):
            raise InputError("token and tag counts differ")


def write_instances_jsonl(instances: list[TrainingInstance], path: str | Path) -> None:
    lines = []
    for instance in instances:
        lines.append(json.dumps({
            "tokens": [{"text": t.text, "role": int(t.role)} for t in instance.tokens],
            "template_id": instance.template_id,
            "tags": [t.render() for t in instance.tags],
        }, sort_keys=True))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_role(value) -> IsoRole:
    try:
        return IsoRole(value)
    except ValueError as exc:
        raise InputError(f"unknown role numeral {value!r}") from exc


def parse_feature_tokens(raw_tokens, context: str = "tokens") -> list[FeatureToken]:
    """Parse a [{"text": ..., "role": ...}] list into positioned FeatureTokens."""
    if not isinstance(raw_tokens, list) or not raw_tokens:
        raise InputError(f"{context} must be a non-empty list")
    tokens = []
    for position, raw in enumerate(raw_tokens):
        if not isinstance(raw, dict) or not isinstance(raw.get("text"), str):
            raise InputError(f"{context}[{position}] lacks a text field")
        tokens.append(FeatureToken(
            text=raw["text"],
            role=_parse_role(raw.get("role")),
            position=position,
        ))
    return tokens


def read_instances_jsonl(path: str | Path) -> list[TrainingInstance]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    instances = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
            tokens = parse_feature_tokens(payload.get("tokens"), "tokens")
            template_id = payload.get("template_id")
            if not isinstance(template_id, int):
                raise InputError("template_id must be an integer")
            raw_tags = payload.get("tags")
            if not isinstance(raw_tags, list) or len(raw_tags) != len(tokens):
                raise InputError("tags must align with tokens")
            tags = tuple(parse_tag(t) for t in raw_tags)
            instances.append(TrainingInstance(tuple(tokens), template_id, tags))
        except (json.JSONDecodeError, InputError) as exc:
            raise InputError(f"{path}:{number}: {exc}") from exc
    if not instances:
        raise InputError(f"{path} contains no training instances")
    return instances


def _req_rng(seed: int, requirement_id: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(requirement_id.encode("utf-8"))])


def reverse_engineer_training_set(
        requirements: list[AnnotatedRequirement],
        templates: list[VariableTemplate],
        seed: int = 0) -> tuple[list[TrainingInstance], list[tuple[str, str]]]:
    """Sample one training instance per requirement.

    Each requirement must match one of the templates (checked on its
    modal-normalized sequence); 2 to 5 of its spans are drawn uniformly
    without replacement, kept in document order. Unusable requirements are
    skipped and reported.
    """
    ordered_templates = sorted(templates, key=lambda t: t.id)
    instances: list[TrainingInstance] = []
    skipped: list[tuple[str, str]] = []
    for req in requirements:
        try:
            sequence = normalize_modals(extract_tag_sequence(req))
        except ExtractionError:
            skipped.append((req.id, "no annotated spans"))
            continue
        binding = next(
            (b for b in (matches(t, sequence) for t in ordered_templates) if b), None)
        if binding is None:
            skipped.append((req.id, "matches no template"))
            continue
        if len(req.spans) < MIN_TOKENS:
            skipped.append((req.id, "fewer than 2 spans"))
            continue
        rng = _req_rng(seed, req.id)
        k = int(rng.integers(MIN_TOKENS, min(MAX_TOKENS, len(req.spans)) + 1))
        chosen = sorted(rng.choice(len(req.spans), size=k, replace=False).tolist())
        tokens = []
        tags = []
        for position, span_index in enumerate(chosen):
            span = req.spans[span_index]
            role = tag_to_role(span.tag, leading=span_index == 0)
            tokens.append(FeatureToken(text=span.text(list(req.tokens)),
                                       role=role, position=position))
            tags.append(span.tag)
        instances.append(TrainingInstance(
            tokens=tuple(tokens),
            template_id=binding.template.id,
            tags=tuple(tags),
        ))
    return instances, skipped
