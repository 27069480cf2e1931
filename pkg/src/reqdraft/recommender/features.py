"""Hashed feature vectors for tokens and token groups.

The embedding is a seeded feature-hashing scheme: character 3-5-grams of the
lowercased text (with boundary markers so short tokens still contribute),
the ISO role, a capped position bucket, and the token count all hash into one
fixed-width vector, which is then L2-normalized. Hashing uses keyed blake2b,
so vectors are reproducible across processes and platforms for a given seed.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, InputError
from ..tags import IsoRole

_POSITION_CAP = 4


@dataclass(frozen=True)
class FeatureToken:
    """One feature token: text, ISO 29148 role, ordinal within its feature."""

    text: str
    role: IsoRole
    position: int


def _bucket(kind: str, value: str, dim: int, seed: int) -> int:
    key = (seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little")
    digest = hashlib.blake2b(f"{kind}|{value}".encode("utf-8"), digest_size=8, key=key).digest()
    return int.from_bytes(digest, "big") % dim


def _char_ngrams(text: str) -> list[str]:
    marked = f"^{text.lower()}$"
    grams = []
    for n in (3, 4, 5):
        grams.extend(marked[i:i + n] for i in range(len(marked) - n + 1))
    return grams


def featurize(tokens: list[FeatureToken], dim: int = 32768, seed: int = 0) -> np.ndarray:
    """Embed a token group into a single L2-normalized vector."""
    if not tokens:
        raise InputError("cannot featurize an empty token list")
    if dim <= 0 or dim & (dim - 1):
        raise ConfigError(f"feature dim must be a power of two, got {dim}")
    vector = np.zeros(dim, dtype=np.float64)
    for token in tokens:
        for gram in _char_ngrams(token.text):
            vector[_bucket("ngram", gram, dim, seed)] += 1.0
        vector[_bucket("role", str(int(token.role)), dim, seed)] += 1.0
        vector[_bucket("pos", str(min(token.position, _POSITION_CAP)), dim, seed)] += 1.0
    vector[_bucket("count", str(len(tokens)), dim, seed)] += 1.0
    norm = float(np.linalg.norm(vector))
    return vector / norm
