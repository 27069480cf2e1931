import numpy as np
import pytest

from instgen import make_instances
from reqdraft.errors import InputError, TrainingError
from reqdraft.recommender import (
    FeatureToken,
    TrainConfig,
    TrainingInstance,
    predict_tags,
    select_template,
    train,
)
from reqdraft.recommender.train import task1_loss_and_grads, task2_loss_and_grads
from reqdraft.tags import ARG0, ARG1, REL, IsoRole


def tiny_instances():
    first = (FeatureToken("system", IsoRole.SUBJECT, 0),
             FeatureToken("display", IsoRole.ACTION, 1))
    second = (FeatureToken("alarm log", IsoRole.OBJECT, 0),
              FeatureToken("archive", IsoRole.ACTION, 1))
    return [TrainingInstance(tokens=first, template_id=1, tags=(ARG0, REL)),
            TrainingInstance(tokens=second, template_id=2, tags=(ARG1, REL))] * 3


def test_task1_gradients_match_finite_differences():
    rng = np.random.default_rng(0)
    n, dim, embed, count = 6, 40, 8, 2
    x = rng.normal(size=(n, dim))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    projection = rng.normal(size=(embed, dim)) * 0.3
    embeddings = rng.normal(size=(count, embed))
    gold = rng.integers(0, count, size=n)
    _, d_projection, d_embeddings = task1_loss_and_grads(projection, embeddings, x, gold)

    eps = 1e-6
    for _ in range(20):
        i, j = int(rng.integers(embed)), int(rng.integers(dim))
        plus, minus = projection.copy(), projection.copy()
        plus[i, j] += eps
        minus[i, j] -= eps
        numeric = (task1_loss_and_grads(plus, embeddings, x, gold)[0]
                   - task1_loss_and_grads(minus, embeddings, x, gold)[0]) / (2 * eps)
        assert numeric == pytest.approx(d_projection[i, j], abs=1e-6)
    for _ in range(20):
        i, j = int(rng.integers(count)), int(rng.integers(embed))
        plus, minus = embeddings.copy(), embeddings.copy()
        plus[i, j] += eps
        minus[i, j] -= eps
        numeric = (task1_loss_and_grads(projection, plus, x, gold)[0]
                   - task1_loss_and_grads(projection, minus, x, gold)[0]) / (2 * eps)
        assert numeric == pytest.approx(d_embeddings[i, j], abs=1e-6)


def test_task2_gradients_match_finite_differences():
    rng = np.random.default_rng(1)
    m, dim = 9, 40
    phi = rng.normal(size=(m, dim))
    phi /= np.linalg.norm(phi, axis=1, keepdims=True)
    gold = rng.integers(0, 8, size=m)
    weights = rng.normal(size=(8, dim)) * 0.2
    _, d_weights = task2_loss_and_grads(weights, phi, gold, 0.2)

    eps = 1e-6
    for _ in range(25):
        i, j = int(rng.integers(8)), int(rng.integers(dim))
        plus, minus = weights.copy(), weights.copy()
        plus[i, j] += eps
        minus[i, j] -= eps
        numeric = (task2_loss_and_grads(plus, phi, gold, 0.2)[0]
                   - task2_loss_and_grads(minus, phi, gold, 0.2)[0]) / (2 * eps)
        assert numeric == pytest.approx(d_weights[i, j], abs=1e-6)


def test_losses_drop_below_initial_on_a_fixed_batch():
    config = TrainConfig(epochs=40, feature_dim=1024, embed_dim=16, seed=0)
    result = train(tiny_instances(), (1, 2), config)
    assert result.task1_losses[-1] <= result.task1_losses[0]
    assert result.task2_losses[-1] <= result.task2_losses[0]


def test_task1_is_monotone_with_frozen_embeddings_and_small_rate():
    config = TrainConfig(epochs=50, learning_rate=0.01, feature_dim=1024,
                         embed_dim=16, seed=0, train_template_embeddings=False)
    result = train(tiny_instances(), (1, 2), config)
    for earlier, later in zip(result.task1_losses, result.task1_losses[1:]):
        assert later <= earlier + 1e-12


def test_task2_loss_reaches_zero_on_separable_data():
    instances = make_instances(60, seed=2)
    config = TrainConfig(epochs=150, feature_dim=2048, embed_dim=16, seed=0)
    result = train(instances, (1, 2), config)
    assert result.task2_losses[-1] == 0.0
    assert result.task2_train_accuracy == 1.0


def test_training_is_seed_deterministic():
    config = TrainConfig(epochs=25, feature_dim=1024, embed_dim=16, seed=5)
    a = train(tiny_instances(), (1, 2), config)
    b = train(tiny_instances(), (1, 2), config)
    assert a.task1_losses == b.task1_losses
    assert a.task2_losses == b.task2_losses
    assert np.array_equal(a.model.instance_projection, b.model.instance_projection)


def test_different_seeds_differ():
    a = train(tiny_instances(), (1, 2), TrainConfig(epochs=5, feature_dim=1024,
                                                    embed_dim=16, seed=0))
    b = train(tiny_instances(), (1, 2), TrainConfig(epochs=5, feature_dim=1024,
                                                    embed_dim=16, seed=1))
    assert not np.array_equal(a.model.instance_projection, b.model.instance_projection)


def test_trained_model_beats_fallback_on_held_out_data():
    from reqdraft.recommender import fallback_recommend
    train_set = make_instances(220, seed=3)
    held_out = make_instances(80, seed=77)
    config = TrainConfig(epochs=120, feature_dim=2048, embed_dim=16, seed=0)
    model = train(train_set, (1, 2), config).model

    def score(instances):
        template_hits = fallback_template_hits = 0
        tag_hits = fallback_tag_hits = tag_total = 0
        for instance in instances:
            tokens = list(instance.tokens)
            template_hits += select_template(model, tokens)[0] == instance.template_id
            tag_hits += sum(a == b for a, b in
                            zip(predict_tags(model, tokens), instance.tags))
            fb_template, fb_tags = fallback_recommend(tokens)
            fallback_template_hits += fb_template == instance.template_id
            fallback_tag_hits += sum(a == b for a, b in zip(fb_tags, instance.tags))
            tag_total += len(instance.tags)
        return (template_hits / len(instances), fallback_template_hits / len(instances),
                tag_hits / tag_total, fallback_tag_hits / tag_total)

    model_template, fallback_template, model_tags, fallback_tags = score(held_out)
    assert model_template >= fallback_template
    assert model_tags >= fallback_tags


def test_empty_instances_is_an_input_error():
    with pytest.raises(InputError):
        train([], (1, 2), TrainConfig(epochs=1, feature_dim=256, embed_dim=8))


def test_unknown_template_id_is_an_input_error():
    first = (FeatureToken("a", IsoRole.SUBJECT, 0), FeatureToken("b", IsoRole.ACTION, 1))
    bad = TrainingInstance(tokens=first, template_id=9, tags=(ARG0, REL))
    with pytest.raises(InputError):
        train([bad], (1, 2), TrainConfig(epochs=1, feature_dim=256, embed_dim=8))


def test_non_finite_loss_aborts_with_diagnostics():
    config = TrainConfig(epochs=5, learning_rate=float("inf"), feature_dim=256,
                         embed_dim=8, seed=0)
    with np.errstate(all="ignore"), pytest.raises(TrainingError) as excinfo:
        train(tiny_instances(), (1, 2), config)
    assert "epoch" in str(excinfo.value)
