"""Feature-token samplers simulating what a requester would type.

Three profiles over an annotated requirement's spans:

* t1: one subject token, one object token, and 1-3 tokens from other spans
* t2: one subject token, the predicate token, and 1-3 tokens from other spans
* t3: 3-5 spans drawn at random

Sampled spans keep document order; roles come from the inverse tag-to-role
mapping. Sampling is deterministic per (seed, requirement id).
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from ..corpus import AnnotatedRequirement, Span
from ..errors import InputError
from ..tags import ARG0, ARG1, REL, tag_to_role
from ..recommender.features import FeatureToken

SAMPLER_KINDS = ("t1", "t2", "t3")


@dataclass(frozen=True)
class SamplerConfig:
    kind: str = "t2"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in SAMPLER_KINDS:
            raise InputError(f"unknown sampler {self.kind!r}, expected one of {SAMPLER_KINDS}")


@dataclass(frozen=True)
class SampledFeature:
    requirement_id: str
    tokens: tuple[FeatureToken, ...]
    span_indices: tuple[int, ...]


def _rng(config: SamplerConfig, requirement_id: str) -> np.random.Generator:
    return np.random.default_rng([config.seed, zlib.crc32(requirement_id.encode("utf-8"))])


def _pick_extra(rng: np.random.Generator, pool: list[int], low: int, high: int) -> list[int]:
    k = int(rng.integers(low, min(high, len(pool)) + 1))
    chosen = rng.choice(len(pool), size=k, replace=False)
    return [pool[i] for i in chosen]


def _feature(req: AnnotatedRequirement, indices: list[int]) -> SampledFeature:
    indices = sorted(indices)
    tokens = []
    for position, span_index in enumerate(indices):
        span: Span = req.spans[span_index]
        role = tag_to_role(span.tag, leading=span_index == 0)
        tokens.append(FeatureToken(text=span.text(list(req.tokens)), role=role,
                                   position=position))
    return SampledFeature(requirement_id=req.id, tokens=tuple(tokens),
                          span_indices=tuple(indices))


def sample_tokens(req: AnnotatedRequirement, config: SamplerConfig) -> SampledFeature:
    """Sample one feature from a requirement; raises when spans are missing."""
    rng = _rng(config, req.id)
    tags = [span.tag for span in req.spans]
    if config.kind == "t3":
        if len(req.spans) < 3:
            raise InputError(f"{req.id}: t3 needs at least 3 spans")
        k = int(rng.integers(3, min(5, len(req.spans)) + 1))
        chosen = rng.choice(len(req.spans), size=k, replace=False).tolist()
        return _feature(req, chosen)

    subject = next((i for i, t in enumerate(tags) if t == ARG0), None)
    if subject is None:
        raise InputError(f"{req.id}: no subject span")
    if config.kind == "t1":
        obj = next((i for i, t in enumerate(tags) if t == ARG1), None)
        if obj is None:
            raise InputError(f"{req.id}: no object span")
        anchors = [subject, obj]
    else:  # t2
        predicate = next((i for i, t in enumerate(tags) if t == REL), None)
        if predicate is None:
            raise InputError(f"{req.id}: no predicate span")
        anchors = [subject, predicate]
    pool = [i for i in range(len(req.spans)) if i not in anchors]
    if not pool:
        raise InputError(f"{req.id}: no spans left to widen the sample")
    return _feature(req, anchors + _pick_extra(rng, pool, 1, 3))


def sample_corpus(requirements: list[AnnotatedRequirement],
                  config: SamplerConfig) -> tuple[list[SampledFeature], list[tuple[str, str]]]:
    """Sample every requirement, reporting the ones that had to be skipped."""
    features: list[SampledFeature] = []
    skipped: list[tuple[str, str]] = []
    for req in requirements:
        try:
            features.append(sample_tokens(req, config))
        except InputError as exc:
            skipped.append((req.id, str(exc)))
    return features, skipped
