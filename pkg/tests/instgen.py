"""Deterministic builder of separable synthetic training instances.

Each SRL tag owns a disjoint vocabulary, and the first token of every
instance carries a marker word that encodes the gold template. Hashed
character n-grams therefore separate both tasks linearly, while the rule
fallback has no access to the marker and misassigns roughly half of the
gold-template-2 instances (which deliberately contain an ACTION token).
"""
from __future__ import annotations

import numpy as np

from reqdraft.recommender import FeatureToken, TrainingInstance
from reqdraft.tags import (
    ARG0,
    ARG1,
    ARG2,
    ARGM_BNF,
    ARGM_LOC,
    ARGM_PRP,
    ARGM_TMP,
    REL,
    tag_to_role,
)

VOCAB = {
    ARG0: ["system", "controller", "gateway", "monitor", "scheduler"],
    REL: ["display", "record", "transmit", "validate", "archive"],
    ARG1: ["alarm status", "log entry", "sensor data", "user profile", "flight plan"],
    ARG2: ["if power fails", "if link drops", "when armed", "if offline", "when idle"],
    ARGM_PRP: ["for audit trail", "for recovery", "for billing", "for diagnosis", "for safety"],
    ARGM_TMP: ["maintenance window", "startup phase", "overnight batch", "peak hours", "grace period"],
    ARGM_LOC: ["ground station", "control room", "edge node", "main cabinet", "backup site"],
    ARGM_BNF: ["field operators", "dispatch crew", "remote users", "site engineers", "pilots"],
}
MARKERS = {1: "alphaform", 2: "betaform"}
_EXTRA_TAGS = [ARG2, ARGM_PRP, ARGM_TMP, ARGM_LOC, ARGM_BNF]


def make_instances(count: int, seed: int) -> list[TrainingInstance]:
    rng = np.random.default_rng(seed)
    instances = []
    for _ in range(count):
        template_id = 1 + int(rng.integers(0, 2))
        core = [ARG0, REL, ARG1][: 2 + int(rng.integers(0, 2))]
        extra_count = int(rng.integers(0, 3))
        extra_indices = rng.choice(len(_EXTRA_TAGS), size=extra_count, replace=False)
        chosen = core + [_EXTRA_TAGS[int(i)] for i in extra_indices]
        tokens, tags = [], []
        for position, tag in enumerate(chosen):
            word = VOCAB[tag][int(rng.integers(0, len(VOCAB[tag])))]
            text = f"{word} {MARKERS[template_id]}" if position == 0 else word
            tokens.append(FeatureToken(
                text=text, role=tag_to_role(tag, leading=position == 0), position=position))
            tags.append(tag)
        instances.append(TrainingInstance(
            tokens=tuple(tokens), template_id=template_id, tags=tuple(tags)))
    return instances
