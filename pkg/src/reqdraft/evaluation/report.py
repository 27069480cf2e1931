"""Metric reports: per-sample scores, aggregates, and export."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import InputError
from .metrics import bleu_n, meteor, nist_per_sample

METRIC_NAMES = ("bleu2", "bleu3", "bleu4", "meteor", "nist")


@dataclass(frozen=True)
class SampleScore:
    id: str
    bleu2: float
    bleu3: float
    bleu4: float
    meteor: float
    nist: float

    def by_name(self, name: str) -> float:
        return getattr(self, name)


@dataclass
class MetricReport:
    per_sample: list[SampleScore]
    aggregates: dict[str, float]
    config: dict = field(default_factory=dict)

    def scores(self, name: str) -> list[float]:
        return [s.by_name(name) for s in self.per_sample]


def build_report(samples: list[tuple[str, str, list[str]]],
                 config: dict | None = None,
                 meteor_alpha: float = 0.9, meteor_beta: float = 3.0,
                 meteor_gamma: float = 0.5, nist_order: int = 5) -> MetricReport:
    """Score (id, candidate, references) samples; aggregate by arithmetic mean.

    METEOR takes the best score over the references; NIST scores each sample
    as a one-segment corpus with shared information weights.
    """
    if not samples:
        raise InputError("no samples to score")
    nist_scores = nist_per_sample([c for _, c, _ in samples], [r for _, _, r in samples],
                                  n=nist_order)
    per_sample = []
    for (sample_id, candidate, references), nist_score in zip(samples, nist_scores):
        if not references:
            raise InputError(f"sample {sample_id} has no references")
        per_sample.append(SampleScore(
            id=sample_id,
            bleu2=bleu_n(candidate, references, 2),
            bleu3=bleu_n(candidate, references, 3),
            bleu4=bleu_n(candidate, references, 4),
            meteor=max(meteor(candidate, ref, alpha=meteor_alpha, beta=meteor_beta,
                              gamma=meteor_gamma) for ref in references),
            nist=nist_score,
        ))
    aggregates = {
        name: sum(s.by_name(name) for s in per_sample) / len(per_sample)
        for name in METRIC_NAMES
    }
    return MetricReport(per_sample=per_sample, aggregates=aggregates,
                        config=dict(config or {}))


def report_payload(report: MetricReport) -> dict:
    return {
        "config": report.config,
        "aggregates": {k: report.aggregates[k] for k in sorted(report.aggregates)},
        "per_sample": [
            {name: getattr(s, name) for name in ("id",) + METRIC_NAMES}
            for s in report.per_sample
        ],
    }


def write_report_json(report: MetricReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(report_payload(report), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")


def write_report_csv(report: MetricReport, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("id",) + tuple(METRIC_NAMES))
        for sample in report.per_sample:
            writer.writerow([sample.id] + [repr(sample.by_name(n)) for n in METRIC_NAMES])
