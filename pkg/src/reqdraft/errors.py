"""Exception taxonomy, aligned with the CLI exit codes.

InputError subclasses exit with 2, ConfigError with 3, everything else
(internal failures) with 1.
"""
from __future__ import annotations


class ReqdraftError(Exception):
    """Base class for all package errors."""


class InputError(ReqdraftError):
    """Bad input data: unreadable files, schema violations, malformed lines."""


class ConfigError(ReqdraftError):
    """Bad or missing configuration, including absent credentials."""


class CorpusError(InputError):
    """Corpus-level problems such as zero valid records."""


class ExtractionError(InputError):
    """A requirement cannot yield a tag sequence (no annotated spans)."""


class TemplateError(InputError):
    """Malformed template text or unusable induction input."""


class VariantError(InputError):
    """A token cannot be bound to any slot of the chosen template."""


class RealizationError(InputError):
    """Strict realization with mandatory slots unbound."""


class ModelFormatError(InputError):
    """Unreadable or version-incompatible model file."""


class TrainingError(ReqdraftError):
    """Training diverged (non-finite loss)."""


class TransportError(ReqdraftError):
    """LLM endpoint unreachable after the configured retries."""


class GenerationError(ReqdraftError):
    """The generation backend produced unusable output."""
