"""Wrapper around the AllenNLP PropBank role labeler.

The predictor archive and the package version are pinned in the adapter
configuration; when the optional packages are missing, loading fails with
the exact install command. BIO tag sequences from the predictor are folded
into start/end spans with the tag surface forms preserved verbatim.
"""
from __future__ import annotations

from .errors import ConfigError, InputError

DEFAULT_ARCHIVE = ("https://storage.googleapis.com/allennlp-public-models/"
                   "structured-prediction-srl-bert.2020.12.15.tar.gz")
DEFAULT_VERSION = "2.10.1"


def load_predictor(archive: str = DEFAULT_ARCHIVE, version: str = DEFAULT_VERSION):
    try:
        from allennlp.predictors.predictor import Predictor
        import allennlp_models.structured_prediction  # noqa: F401
    except ImportError as exc:
        raise ConfigError(
            "backend 'allennlp' needs its optional packages; install them with: "
            f"pip install allennlp=={version} allennlp-models=={version}") from exc
    return Predictor.from_path(archive)


def frames_from_prediction(prediction: dict) -> tuple[list[str], list[dict]]:
    """Convert one predictor output ({words, verbs: [{tags}]}) to frames."""
    words = prediction.get("words")
    if not isinstance(words, list) or not words:
        raise InputError("predictor output has no words")
    frames = []
    for verb in prediction.get("verbs", []):
        bio = verb.get("tags", [])
        if len(bio) != len(words):
            raise InputError("predictor tags are misaligned with words")
        spans = []
        i = 0
        while i < len(bio):
            label = bio[i]
            if not label.startswith("B-"):
                i += 1
                continue
            tag = label[2:]
            j = i + 1
            while j < len(bio) and bio[j] == f"I-{tag}":
                j += 1
            spans.append({"start": i, "end": j, "tag": tag})
            i = j
        predicate = next((s["start"] for s in spans if s["tag"] == "V"), None)
        if predicate is None:
            continue
        frames.append({"predicate_index": predicate, "spans": spans})
    return words, frames


def make_annotator(archive: str, version: str):
    predictor = load_predictor(archive, version)

    def annotate_line(text: str) -> tuple[list[str], list[dict]]:
        prediction = predictor.predict(sentence=text)
        return frames_from_prediction(prediction)

    return annotate_line
