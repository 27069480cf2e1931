"""Evaluation: overlap metrics, significance tests, samplers, reports."""
from .metrics import bleu_n, meteor, modified_precision, nist_n, nist_per_sample, stem
from .report import METRIC_NAMES, MetricReport, SampleScore, build_report, report_payload, write_report_csv, write_report_json
from .sampling import SampledFeature, SamplerConfig, sample_corpus, sample_tokens
from .stats import StatTestResult, cohens_d, holm_adjust, kfold_split, mann_whitney_one_tailed

__all__ = [
    "bleu_n",
    "meteor",
    "modified_precision",
    "nist_n",
    "nist_per_sample",
    "stem",
    "METRIC_NAMES",
    "MetricReport",
    "SampleScore",
    "build_report",
    "report_payload",
    "write_report_csv",
    "write_report_json",
    "SampledFeature",
    "SamplerConfig",
    "sample_corpus",
    "sample_tokens",
    "StatTestResult",
    "cohens_d",
    "holm_adjust",
    "kfold_split",
    "mann_whitney_one_tailed",
]
