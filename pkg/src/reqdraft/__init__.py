"""Turn annotated feature tokens into ISO-style functional requirement drafts.

The pipeline: ingest annotated requirements, induce variable templates from
their tag sequences, recommend a template and tag assignment for a bag of
feature tokens, construct the bound variant, and realize or LLM-polish it
into a single-sentence draft. An evaluation layer scores drafts against
reference texts and runs paired significance tests.
"""
from .corpus import (
    AnnotatedRequirement,
    FilterPolicy,
    Span,
    TagSequence,
    extract_tag_sequence,
    filter_corpus,
    ingest_annotations,
    split_sentences,
    tokenize_words,
    write_annotations,
)
from .errors import (
    ConfigError,
    CorpusError,
    ExtractionError,
    GenerationError,
    InputError,
    ModelFormatError,
    RealizationError,
    ReqdraftError,
    TemplateError,
    TrainingError,
    TransportError,
    VariantError,
)
from .generation import Draft, GenerationRequest, LlmClient, LlmConfig, generate, realize
from .recommender import (
    FeatureToken,
    RecommenderModel,
    TemplateVariant,
    TrainConfig,
    TrainResult,
    TrainingInstance,
    construct_variant,
    fallback_recommend,
    featurize,
    load_model,
    predict_tags,
    read_instances_jsonl,
    reverse_engineer_training_set,
    save_model,
    select_template,
    train,
    write_instances_jsonl,
)
from .tags import TABLE_ORDER, IsoRole, SrlTag, parse_tag, tag_order, tag_to_role
from .templates import (
    DEFAULT_INVENTORY,
    DEFAULT_TEMPLATES,
    TEMPLATE_1,
    TEMPLATE_2,
    VariableTemplate,
    count_variants,
    enumerate_variant_strings,
    induce_templates,
    normalize_modals,
    parse_template_line,
    parse_templates_text,
    render_templates_text,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedRequirement",
    "ConfigError",
    "CorpusError",
    "DEFAULT_INVENTORY",
    "DEFAULT_TEMPLATES",
    "Draft",
    "ExtractionError",
    "FeatureToken",
    "FilterPolicy",
    "GenerationError",
    "GenerationRequest",
    "InputError",
    "IsoRole",
    "LlmClient",
    "LlmConfig",
    "ModelFormatError",
    "RealizationError",
    "RecommenderModel",
    "ReqdraftError",
    "Span",
    "SrlTag",
    "TABLE_ORDER",
    "TEMPLATE_1",
    "TEMPLATE_2",
    "TagSequence",
    "TemplateError",
    "TemplateVariant",
    "TrainConfig",
    "TrainResult",
    "TrainingError",
    "TrainingInstance",
    "TransportError",
    "VariableTemplate",
    "VariantError",
    "construct_variant",
    "count_variants",
    "enumerate_variant_strings",
    "extract_tag_sequence",
    "fallback_recommend",
    "featurize",
    "filter_corpus",
    "generate",
    "induce_templates",
    "ingest_annotations",
    "load_model",
    "normalize_modals",
    "parse_tag",
    "parse_template_line",
    "parse_templates_text",
    "predict_tags",
    "read_instances_jsonl",
    "realize",
    "render_templates_text",
    "reverse_engineer_training_set",
    "save_model",
    "select_template",
    "split_sentences",
    "tag_order",
    "tag_to_role",
    "tokenize_words",
    "train",
    "write_annotations",
    "write_instances_jsonl",
]
