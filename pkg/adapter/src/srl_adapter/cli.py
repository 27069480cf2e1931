"""Command line entry point: annotate a plain-text requirements file.

One requirement per input line; empty lines are skipped. Each remaining
line becomes one record with the backend's own tokenization and its role
frames; a line the backend cannot frame is still emitted (with empty
frames) and reported as a warning. Exit codes: 0 success, 1 internal
error, 2 input error, 3 configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import AdapterError, ConfigError, InputError
from . import allennlp_backend, heuristic

DEFAULTS: dict = {
    "predictor": {
        "backend": "heuristic",
        "archive": allennlp_backend.DEFAULT_ARCHIVE,
        "version": allennlp_backend.DEFAULT_VERSION,
    },
    "output": {
        "id_prefix": "req",
    },
}


def _merge_config(base: dict, override: dict, path: str = "") -> dict:
    merged = {k: (dict(v) if isinstance(v, dict) else v) for k, v in base.items()}
    for key, value in override.items():
        where = f"{path}{key}"
        if key not in merged:
            raise ConfigError(f"unknown configuration key: {where}")
        if isinstance(merged[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"configuration key {where} must be a table")
            merged[key] = _merge_config(merged[key], value, where + ".")
        elif not isinstance(value, type(merged[key])):
            raise ConfigError(f"configuration key {where} has the wrong type")
        else:
            merged[key] = value
    return merged


def load_config(path: str | None) -> dict:
    if path is None:
        return _merge_config(DEFAULTS, {})
    try:
        import tomllib
    except ImportError:  # Python 3.10
        import tomli as tomllib
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc
    return _merge_config(DEFAULTS, data)


def _make_annotator(config: dict):
    predictor = config["predictor"]
    if predictor["backend"] == "heuristic":
        return heuristic.annotate_line
    if predictor["backend"] == "allennlp":
        return allennlp_backend.make_annotator(predictor["archive"],
                                               predictor["version"])
    raise ConfigError(f"unknown backend {predictor['backend']!r}; "
                      "expected 'heuristic' or 'allennlp'")


def build_payload(lines: list[str], annotate, id_prefix: str = "req",
                  warn=None) -> dict:
    """Annotate (line_number, text) pairs into the corpus payload."""
    records = []
    for number, text in lines:
        tokens, frames = annotate(text)
        if not tokens:
            raise InputError(f"line {number} has no tokens")
        if not frames and warn is not None:
            warn(f"line {number} yielded no frame; emitting empty frames: {text!r}")
        records.append({
            "id": f"{id_prefix}-{len(records) + 1:04d}",
            "text": text,
            "tokens": tokens,
            "frames": frames,
        })
    return {"requirements": records}


def annotate_file(in_path: str | Path, out_path: str | Path,
                  config: dict | None = None, warn=None) -> dict:
    config = config or _merge_config(DEFAULTS, {})
    try:
        text = Path(in_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {in_path}: {exc}") from exc
    lines = [(number, line.strip())
             for number, line in enumerate(text.splitlines(), start=1)
             if line.strip()]
    if not lines:
        raise InputError(f"{in_path} contains no requirement lines")
    annotate = _make_annotator(config)
    payload = build_payload(lines, annotate, config["output"]["id_prefix"], warn)
    Path(out_path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srl-annotate",
        description="Annotate plain-text requirements (one per line) with "
                    "semantic role spans and write the corpus JSON.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    parser.add_argument("--in", dest="in_path", required=True,
                        help="plain-text input, one requirement per line")
    parser.add_argument("--out", dest="out_path", required=True,
                        help="annotation JSON output path")
    parser.add_argument("--backend", choices=("heuristic", "allennlp"),
                        help="override the configured predictor backend")
    parser.add_argument("--config", help="TOML configuration file")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.backend is not None:
            config["predictor"]["backend"] = args.backend
        warnings = []

        def warn(message: str) -> None:
            warnings.append(message)
            print(f"warning: {message}", file=sys.stderr)

        payload = annotate_file(args.in_path, args.out_path, config, warn)
        framed = sum(1 for r in payload["requirements"] if r["frames"])
        print(f"annotated {len(payload['requirements'])} requirements "
              f"({framed} with frames) -> {args.out_path}")
        return 0
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except AdapterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
