"""Template and tag recommendation from role-labelled feature tokens."""
from .data import TrainingInstance, read_instances_jsonl, reverse_engineer_training_set, write_instances_jsonl
from .fallback import constraint_tag, fallback_recommend
from .features import FeatureToken, featurize
from .model import RecommenderModel, load_model, predict_tags, save_model, select_template
from .train import TrainConfig, TrainResult, train
from .variants import TemplateVariant, VariantSlot, construct_variant

__all__ = [
    "FeatureToken",
    "featurize",
    "RecommenderModel",
    "save_model",
    "load_model",
    "select_template",
    "predict_tags",
    "TrainConfig",
    "TrainResult",
    "train",
    "fallback_recommend",
    "constraint_tag",
    "TemplateVariant",
    "VariantSlot",
    "construct_variant",
    "TrainingInstance",
    "read_instances_jsonl",
    "write_instances_jsonl",
    "reverse_engineer_training_set",
]
