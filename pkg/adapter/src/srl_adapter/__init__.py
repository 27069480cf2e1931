"""Semantic-role annotation adapter.

Turns a plain-text file of requirement sentences (one per line) into the
annotation JSON that the reqdraft pipeline ingests. Ships a dependency-free
rule backend and an optional pretrained-model backend.
"""
from .errors import AdapterError, ConfigError, InputError
from .heuristic import annotate_line, annotate_tokens
from .tokenizer import tokenize
from .allennlp_backend import frames_from_prediction

__version__ = "0.1.0"

__all__ = [
    "AdapterError",
    "ConfigError",
    "InputError",
    "annotate_line",
    "annotate_tokens",
    "frames_from_prediction",
    "tokenize",
    "__version__",
]
