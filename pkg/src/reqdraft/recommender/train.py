"""Full-batch gradient-descent training for the two recommendation tasks.

Task I (template selection): cross-entropy over cosine-similarity logits
between the projected instance vector and one embedding per template.
Task II (tag assignment): multi-negative hinge on per-token tag scores,
summing max(0, margin - (s_pos - s_neg)) over the negative tags.

Both tasks are trained with plain gradient descent at a fixed learning rate;
given a seed the whole run is deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError, TrainingError
from ..tags import TABLE_ORDER
from .data import TrainingInstance
from .features import featurize
from .model import RecommenderModel

_EPS = 1e-12

_TAG_INDEX = {tag: i for i, tag in enumerate(TABLE_ORDER)}


@dataclass
class TrainConfig:
    epochs: int = 200
    learning_rate: float = 0.1
    margin: float = 0.2
    feature_dim: int = 32768
    embed_dim: int = 64
    seed: int = 0
    train_template_embeddings: bool = True


@dataclass
class TrainResult:
    model: RecommenderModel
    task1_losses: list[float] = field(default_factory=list)
    task2_losses: list[float] = field(default_factory=list)
    task1_train_accuracy: float = 0.0
    task2_train_accuracy: float = 0.0


def _softmax(rows: np.ndarray) -> np.ndarray:
    shifted = np.exp(rows - rows.max(axis=1, keepdims=True))
    return shifted / shifted.sum(axis=1, keepdims=True)


def task1_loss_and_grads(projection: np.ndarray, embeddings: np.ndarray,
                         x: np.ndarray, gold: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Cross-entropy over cosine logits; returns (loss, d_projection, d_embeddings)."""
    n = x.shape[0]
    z = x @ projection.T
    z_norms = np.maximum(np.linalg.norm(z, axis=1, keepdims=True), _EPS)
    u = z / z_norms
    e_norms = np.maximum(np.linalg.norm(embeddings, axis=1, keepdims=True), _EPS)
    v = embeddings / e_norms
    sims = u @ v.T
    probs = _softmax(sims)
    loss = float(-np.mean(np.log(np.maximum(probs[np.arange(n), gold], _EPS))))

    d_sims = probs.copy()
    d_sims[np.arange(n), gold] -= 1.0
    d_sims /= n
    d_u = d_sims @ v
    d_z = (d_u - u * np.sum(d_u * u, axis=1, keepdims=True)) / z_norms
    d_projection = d_z.T @ x
    d_v = d_sims.T @ u
    d_embeddings = (d_v - v * np.sum(d_v * v, axis=1, keepdims=True)) / e_norms
    return loss, d_projection, d_embeddings


def task2_loss_and_grads(tag_weights: np.ndarray, phi: np.ndarray,
                         gold: np.ndarray, margin: float) -> tuple[float, np.ndarray]:
    """Multi-negative hinge loss; returns (loss, d_tag_weights)."""
    m = phi.shape[0]
    scores = phi @ tag_weights.T
    pos = scores[np.arange(m), gold][:, None]
    violations = np.maximum(0.0, margin - pos + scores)
    violations[np.arange(m), gold] = 0.0
    loss = float(violations.sum() / m)

    active = (violations > 0).astype(np.float64)
    d_scores = active / m
    d_scores[np.arange(m), gold] -= active.sum(axis=1) / m
    return loss, d_scores.T @ phi


def train(instances: list[TrainingInstance], template_ids: tuple[int, ...],
          config: TrainConfig | None = None) -> TrainResult:
    """Train both tasks; raises TrainingError if the loss leaves the reals."""
    config = config or TrainConfig()
    if not instances:
        raise InputError("no training instances")
    id_index = {tid: i for i, tid in enumerate(template_ids)}
    for instance in instances:
        if instance.template_id not in id_index:
            raise InputError(
                f"instance references template {instance.template_id}, not in {sorted(template_ids)}")

    x = np.stack([featurize(list(inst.tokens), config.feature_dim, config.seed)
                  for inst in instances])
    gold_template = np.array([id_index[inst.template_id] for inst in instances])
    phi_rows = []
    gold_tags = []
    for instance in instances:
        for token, tag in zip(instance.tokens, instance.tags):
            phi_rows.append(featurize([token], config.feature_dim, config.seed))
            gold_tags.append(_TAG_INDEX[tag])
    phi = np.stack(phi_rows)
    gold_tag = np.array(gold_tags)

    rng = np.random.default_rng(config.seed)
    projection = rng.normal(0.0, 1.0 / np.sqrt(config.feature_dim),
                            size=(config.embed_dim, config.feature_dim))
    embeddings = rng.normal(0.0, 1.0, size=(len(template_ids), config.embed_dim))
    tag_weights = np.zeros((len(TABLE_ORDER), config.feature_dim))

    result = TrainResult(model=None)  # filled below
    for epoch in range(config.epochs):
        loss1, d_projection, d_embeddings = task1_loss_and_grads(
            projection, embeddings, x, gold_template)
        loss2, d_tag_weights = task2_loss_and_grads(tag_weights, phi, gold_tag, config.margin)
        if not (np.isfinite(loss1) and np.isfinite(loss2)):
            raise TrainingError(
                f"non-finite loss at epoch {epoch}: task1={loss1}, task2={loss2}")
        projection -= config.learning_rate * d_projection
        if config.train_template_embeddings:
            embeddings -= config.learning_rate * d_embeddings
        tag_weights -= config.learning_rate * d_tag_weights
        result.task1_losses.append(loss1)
        result.task2_losses.append(loss2)

    model = RecommenderModel(
        feature_dim=config.feature_dim,
        hash_seed=config.seed,
        margin=config.margin,
        template_ids=tuple(template_ids),
        template_embeddings=embeddings,
        instance_projection=projection,
        tag_weights=tag_weights,
    )
    result.model = model

    z = x @ projection.T
    z_norms = np.maximum(np.linalg.norm(z, axis=1, keepdims=True), _EPS)
    e_norms = np.maximum(np.linalg.norm(embeddings, axis=1, keepdims=True), _EPS)
    sims = (z / z_norms) @ (embeddings / e_norms).T
    result.task1_train_accuracy = float(np.mean(np.argmax(sims, axis=1) == gold_template))
    scores = phi @ tag_weights.T
    result.task2_train_accuracy = float(np.mean(np.argmax(scores, axis=1) == gold_tag))
    return result
