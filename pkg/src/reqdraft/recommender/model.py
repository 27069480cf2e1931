"""Recommender model: contrastive template selector plus per-tag scorers.

Template selection projects the instance vector and ranks templates by cosine
similarity (softmax for probabilities); tag prediction scores each token
against eight weight vectors, one per named tag, tie-broken by the fixed tag
precedence. The model file is a bespoke deterministic binary (JSON header plus
raw float64 buffers) so identical training runs produce identical bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InputError, ModelFormatError
from ..tags import TABLE_ORDER, SrlTag
from .features import FeatureToken, featurize

MODEL_MAGIC = b"RQDMODEL"
MODEL_VERSION = 1


@dataclass
class RecommenderModel:
    feature_dim: int
    hash_seed: int
    margin: float
    template_ids: tuple[int, ...]
    template_embeddings: np.ndarray  # (templates, embed_dim)
    instance_projection: np.ndarray  # (embed_dim, feature_dim)
    tag_weights: np.ndarray          # (len(TABLE_ORDER), feature_dim)
    version: int = MODEL_VERSION

    @property
    def embed_dim(self) -> int:
        return int(self.instance_projection.shape[0])

    @classmethod
    def zero(cls, template_ids: tuple[int, ...], feature_dim: int = 32768,
             embed_dim: int = 64, hash_seed: int = 0, margin: float = 0.2) -> "RecommenderModel":
        return cls(
            feature_dim=feature_dim,
            hash_seed=hash_seed,
            margin=margin,
            template_ids=tuple(template_ids),
            template_embeddings=np.zeros((len(template_ids), embed_dim)),
            instance_projection=np.zeros((embed_dim, feature_dim)),
            tag_weights=np.zeros((len(TABLE_ORDER), feature_dim)),
        )


def _cosine_row(z: np.ndarray, embeddings: np.ndarray) -> np.ndarray:
    z_norm = float(np.linalg.norm(z))
    e_norms = np.linalg.norm(embeddings, axis=1)
    sims = np.zeros(embeddings.shape[0])
    if z_norm == 0.0:
        return sims
    nonzero = e_norms > 0.0
    sims[nonzero] = (embeddings[nonzero] @ z) / (e_norms[nonzero] * z_norm)
    return sims


def select_template(model: RecommenderModel, tokens: list[FeatureToken]) -> tuple[int, dict[int, float]]:
    """Pick a template id; returns (id, softmax probabilities by id).

    Ties go to the lower template id, which also covers the untrained case
    where all similarities are equal.
    """
    x = featurize(tokens, model.feature_dim, model.hash_seed)
    z = model.instance_projection @ x
    sims = _cosine_row(z, model.template_embeddings)
    shifted = np.exp(sims - sims.max())
    probs = shifted / shifted.sum()
    order = sorted(range(len(model.template_ids)), key=lambda i: model.template_ids[i])
    best = order[0]
    for i in order[1:]:
        if sims[i] > sims[best]:
            best = i
    return model.template_ids[best], {tid: float(p) for tid, p in zip(model.template_ids, probs)}


def predict_tags(model: RecommenderModel, tokens: list[FeatureToken]) -> list[SrlTag]:
    """Score each token against the named tags; ties take the earlier tag.

    A zero model therefore predicts the predicate tag for every token.
    """
    predictions = []
    for token in tokens:
        phi = featurize([token], model.feature_dim, model.hash_seed)
        scores = model.tag_weights @ phi
        best = 0
        for k in range(1, len(TABLE_ORDER)):
            if scores[k] > scores[best]:
                best = k
        predictions.append(TABLE_ORDER[best])
    return predictions


def save_model(model: RecommenderModel, path: str | Path) -> None:
    header = {
        "version": model.version,
        "feature_dim": model.feature_dim,
        "embed_dim": model.embed_dim,
        "hash_seed": model.hash_seed,
        "margin": model.margin,
        "template_ids": list(model.template_ids),
        "tag_count": int(model.tag_weights.shape[0]),
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(len(blob).to_bytes(4, "little"))
        fh.write(blob)
        for array in (model.template_embeddings, model.instance_projection, model.tag_weights):
            fh.write(np.ascontiguousarray(array, dtype=np.float64).tobytes())


def load_model(path: str | Path) -> RecommenderModel:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read model file {path}: {exc}") from exc
    if raw[:len(MODEL_MAGIC)] != MODEL_MAGIC:
        raise ModelFormatError(f"{path} is not a recommender model file")
    offset = len(MODEL_MAGIC)
    header_len = int.from_bytes(raw[offset:offset + 4], "little")
    offset += 4
    try:
        header = json.loads(raw[offset:offset + header_len].decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelFormatError(f"{path} has a corrupt header") from exc
    if not isinstance(header, dict):
        raise ModelFormatError(f"{path} has a corrupt header")
    offset += header_len
    if header.get("version") != MODEL_VERSION:
        raise ModelFormatError(
            f"{path} is model format version {header.get('version')}, expected {MODEL_VERSION}")
    try:
        feature_dim = int(header["feature_dim"])
        embed_dim = int(header["embed_dim"])
        template_ids = tuple(int(i) for i in header["template_ids"])
        tag_count = int(header["tag_count"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"{path} has an incomplete header") from exc
    shapes = [(len(template_ids), embed_dim), (embed_dim, feature_dim), (tag_count, feature_dim)]
    arrays = []
    for shape in shapes:
        size = shape[0] * shape[1] * 8
        if offset + size > len(raw):
            raise ModelFormatError(f"{path} is truncated")
        arrays.append(np.frombuffer(raw[offset:offset + size], dtype=np.float64).reshape(shape).copy())
        offset += size
    if offset != len(raw):
        raise ModelFormatError(f"{path} has trailing bytes")
    return RecommenderModel(
        feature_dim=feature_dim,
        hash_seed=int(header["hash_seed"]),
        margin=float(header["margin"]),
        template_ids=template_ids,
        template_embeddings=arrays[0],
        instance_projection=arrays[1],
        tag_weights=arrays[2],
        version=int(header["version"]),
    )
