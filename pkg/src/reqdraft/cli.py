"""Command line entry points.

Subcommands: induce, train, recommend, generate, evaluate. Configuration
comes from defaults, then an optional TOML file, then flags, in that order;
every run writes the effective configuration beside its outputs. Exit codes:
0 success, 1 internal error, 2 input error, 3 configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .corpus import FilterPolicy, extract_tag_sequence, filter_corpus, ingest_annotations
from .errors import ConfigError, InputError, ReqdraftError
from .evaluation import (
    METRIC_NAMES,
    SamplerConfig,
    build_report,
    holm_adjust,
    kfold_split,
    mann_whitney_one_tailed,
    sample_corpus,
    write_report_csv,
    write_report_json,
)
from .generation import Draft, GenerationRequest, LlmClient, LlmConfig, generate_batch
from .recommender import (
    FeatureToken,
    TrainConfig,
    construct_variant,
    fallback_recommend,
    load_model,
    predict_tags,
    read_instances_jsonl,
    save_model,
    select_template,
    train,
)
from .recommender.data import parse_feature_tokens
from .tags import parse_tag
from .templates import (
    DEFAULT_TEMPLATES,
    induce_templates,
    induction_report_payload,
    parse_templates_text,
    render_templates_text,
)

DEFAULTS: dict = {
    "filter": {
        "min_words": 4,
        "drop_multi_sentence": True,
        "drop_verb_object": True,
        "drop_single_span": True,
    },
    "induce": {"min_support": 2},
    "recommender": {
        "feature_dim": 32768,
        "embed_dim": 64,
        "epochs": 200,
        "learning_rate": 0.1,
        "margin": 0.2,
        "seed": 0,
    },
    "generation": {
        "mode": "realizer",
        "permissive": False,
        "prune_empty_slots": False,
        "max_in_flight": 4,
    },
    "llm": {
        "endpoint": "",
        "model": "",
        "temperature": 0.0,
        "max_tokens": 128,
        "timeout": 30.0,
        "retries": 3,
        "backoff": 0.5,
        "credential_env": "REQDRAFT_API_KEY",
    },
    "sampler": {"kind": "t2", "seed": 0},
    "evaluate": {
        "k": 0,
        "seed": 0,
        "nist_order": 5,
        "meteor_alpha": 0.9,
        "meteor_beta": 3.0,
        "meteor_gamma": 0.5,
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
        else:
            if value is not None and not isinstance(value, type(merged[key])) and not (
                    isinstance(merged[key], float) and isinstance(value, int)):
                raise ConfigError(f"configuration key {where} has the wrong type")
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


def _resolve_out(args) -> Path:
    if getattr(args, "out", None):
        out = Path(args.out)
    else:
        stamp = time.strftime("%Y%m%dT%H%M%S")
        seed = getattr(args, "seed", None) or 0
        out = Path("runs") / f"{stamp}-seed{seed}"
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_snapshot(out: Path, command: str, config: dict, inputs: dict) -> None:
    snapshot = {"command": command, "inputs": inputs, "config": config}
    (out / "config.json").write_text(
        json.dumps(snapshot, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _load_templates(path: str | None):
    if path is None:
        return list(DEFAULT_TEMPLATES)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read templates {path}: {exc}") from exc
    return parse_templates_text(text)


def _template_by_id(templates, template_id: int):
    for template in templates:
        if template.id == template_id:
            return template
    raise InputError(f"no template with id {template_id}")


def cmd_induce(args) -> int:
    config = load_config(args.config)
    if args.min_support is not None:
        config["induce"]["min_support"] = args.min_support
    result = ingest_annotations(args.corpus)
    for rid, reason in result.skipped:
        _warn(f"skipped {rid}: {reason}")
    filtered = filter_corpus(result.requirements, FilterPolicy(**config["filter"]))
    for rid, reason in filtered.dropped:
        _warn(f"dropped {rid}: {reason}")
    sequences = [extract_tag_sequence(req) for req in filtered.kept]
    if not sequences:
        raise InputError(f"{args.corpus}: no requirements survived filtering")
    report = induce_templates(sequences, min_support=config["induce"]["min_support"])

    out = _resolve_out(args)
    (out / "templates.txt").write_text(render_templates_text(report.templates), encoding="utf-8")
    payload = induction_report_payload(report)
    payload["ingest_skipped"] = [{"id": r, "reason": why} for r, why in result.skipped]
    payload["filter_dropped"] = [{"id": r, "reason": why} for r, why in filtered.dropped]
    (out / "induction_report.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_snapshot(out, "induce", config, {"corpus": args.corpus})

    print(render_templates_text(report.templates), end="")
    print(f"covered {report.covered}/{report.total_sequences} sequences, "
          f"{len(report.uncovered)} distinct uncovered")
    return 0


def _fallback_accuracies(instances) -> tuple[float, float]:
    template_hits = 0
    tag_hits = 0
    tag_total = 0
    for instance in instances:
        template_id, tags = fallback_recommend(list(instance.tokens))
        template_hits += int(template_id == instance.template_id)
        tag_hits += sum(int(a == b) for a, b in zip(tags, instance.tags))
        tag_total += len(instance.tags)
    return template_hits / len(instances), tag_hits / tag_total


def cmd_train(args) -> int:
    config = load_config(args.config)
    section = config["recommender"]
    if args.seed is not None:
        section["seed"] = args.seed
    if args.epochs is not None:
        section["epochs"] = args.epochs
    if args.feature_dim is not None:
        section["feature_dim"] = args.feature_dim

    instances = read_instances_jsonl(args.instances)
    templates = _load_templates(args.templates)
    train_config = TrainConfig(
        epochs=section["epochs"],
        learning_rate=section["learning_rate"],
        margin=section["margin"],
        feature_dim=section["feature_dim"],
        embed_dim=section["embed_dim"],
        seed=section["seed"],
    )
    result = train(instances, tuple(t.id for t in templates), train_config)
    fallback_template_acc, fallback_tag_acc = _fallback_accuracies(instances)

    out = _resolve_out(args)
    save_model(result.model, out / "model.bin")
    summary = {
        "instances": len(instances),
        "epochs": train_config.epochs,
        "task1_final_loss": result.task1_losses[-1],
        "task2_final_loss": result.task2_losses[-1],
        "task1_train_accuracy": result.task1_train_accuracy,
        "task2_train_accuracy": result.task2_train_accuracy,
        "fallback_template_accuracy": fallback_template_acc,
        "fallback_tag_accuracy": fallback_tag_acc,
    }
    (out / "training.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_snapshot(out, "train", config,
                    {"instances": args.instances, "templates": args.templates})

    print(f"trained on {len(instances)} instances for {train_config.epochs} epochs")
    print(f"task1 accuracy {result.task1_train_accuracy:.3f} "
          f"(fallback {fallback_template_acc:.3f}), "
          f"task2 accuracy {result.task2_train_accuracy:.3f} "
          f"(fallback {fallback_tag_acc:.3f})")
    return 0


def _read_tokens_file(path: str) -> list[dict]:
    """A features file: one JSON object, or JSONL with one feature per line."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    stripped = text.strip()
    if not stripped:
        raise InputError(f"{path} is empty")
    if stripped.startswith("{") and "\n{" not in stripped:
        payloads = [json.loads(stripped)]
    else:
        payloads = []
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                payloads.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}:{number}: {exc}") from exc
    features = []
    for ordinal, payload in enumerate(payloads):
        if isinstance(payload, list):
            payload = {"tokens": payload}
        if not isinstance(payload, dict):
            raise InputError(f"{path}: feature #{ordinal} is not an object")
        payload.setdefault("id", f"feature-{ordinal}")
        payload["tokens"] = parse_feature_tokens(payload.get("tokens"), "tokens")
        features.append(payload)
    return features


def _parse_forced_tags(raw: str, count: int):
    tags = [parse_tag(part) for part in raw.split(",") if part.strip()]
    if len(tags) != count:
        raise InputError(f"--force-tags lists {len(tags)} tags for {count} tokens")
    bad = [t for t in tags if t.is_other]
    if bad:
        raise InputError(f"unknown tags in --force-tags: {', '.join(t.render() for t in bad)}")
    return tags


def _recommend_for(tokens: list[FeatureToken], model, templates,
                   force_template: int | None, force_tags):
    if model is not None:
        template_id, _ = select_template(model, tokens)
        tags = predict_tags(model, tokens)
    else:
        template_id, tags = fallback_recommend(tokens)
    if force_template is not None:
        template_id = force_template
    if force_tags is not None:
        tags = force_tags
    return _template_by_id(templates, template_id), tags


def cmd_recommend(args) -> int:
    config = load_config(args.config)
    if args.prune_empty_slots:
        config["generation"]["prune_empty_slots"] = True
    features = _read_tokens_file(args.tokens_file)
    if len(features) != 1:
        raise InputError("recommend expects exactly one feature; use generate for batches")
    tokens = features[0]["tokens"]
    templates = _load_templates(args.templates)
    model = load_model(args.model) if args.model else None
    if model is None:
        _warn("no model supplied; using the rule fallback")
    force_tags = _parse_forced_tags(args.force_tags, len(tokens)) if args.force_tags else None
    template, tags = _recommend_for(tokens, model, templates, args.force_template, force_tags)
    variant = construct_variant(
        template, tokens, tags,
        prune_empty_slots=config["generation"]["prune_empty_slots"])
    print(variant.rendered)
    if args.out:
        out = _resolve_out(args)
        (out / "variant.json").write_text(json.dumps({
            "template_id": variant.template_id,
            "rendered": variant.rendered,
        }, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        _write_snapshot(out, "recommend", config, {
            "tokens_file": args.tokens_file,
            "model": args.model,
            "templates": args.templates,
        })
    return 0


def _draft_payload(draft: Draft) -> dict:
    return {
        "id": draft.id,
        "text": draft.text,
        "mode": draft.mode,
        "attempts": draft.attempts,
        "deterministic": draft.deterministic,
        "variant": draft.variant_rendered,
    }


def cmd_generate(args) -> int:
    config = load_config(args.config)
    generation = config["generation"]
    if args.mode is not None:
        generation["mode"] = args.mode
    if args.permissive:
        generation["permissive"] = True
    if args.prune_empty_slots:
        generation["prune_empty_slots"] = True
    if args.sampler is not None:
        config["sampler"]["kind"] = args.sampler
    if args.seed is not None:
        config["sampler"]["seed"] = args.seed

    templates = _load_templates(args.templates)
    model = load_model(args.model) if args.model else None

    if (args.tokens_file is None) == (args.dataset is None):
        raise InputError("generate needs exactly one of a tokens file or --dataset")
    features: list[dict] = []
    if args.tokens_file is not None:
        features = _read_tokens_file(args.tokens_file)
    else:
        ingest = ingest_annotations(args.dataset)
        for rid, reason in ingest.skipped:
            _warn(f"skipped {rid}: {reason}")
        sampled, skipped = sample_corpus(
            ingest.requirements,
            SamplerConfig(kind=config["sampler"]["kind"], seed=config["sampler"]["seed"]))
        for rid, reason in skipped:
            _warn(f"not sampled {rid}: {reason}")
        features = [{"id": f.requirement_id, "tokens": list(f.tokens)} for f in sampled]
    if not features:
        raise InputError("no features to generate from")

    requests_ = []
    for feature in features:
        tokens = feature["tokens"]
        forced_template = feature.get("template_id")
        forced_tags = None
        if feature.get("tags") is not None:
            raw_tags = feature["tags"]
            if not isinstance(raw_tags, list) or len(raw_tags) != len(tokens):
                raise InputError(f"feature {feature['id']}: tags must align with tokens")
            forced_tags = [parse_tag(t) for t in raw_tags]
        template, tags = _recommend_for(tokens, model, templates, forced_template, forced_tags)
        variant = construct_variant(
            template, tokens, tags,
            prune_empty_slots=generation["prune_empty_slots"])
        requests_.append(GenerationRequest(
            id=feature["id"], tokens=tuple(tokens), variant=variant,
            mode=generation["mode"]))

    client = None
    if generation["mode"] == "llm":
        llm = config["llm"]
        client = LlmClient(LlmConfig(
            endpoint=llm["endpoint"], model=llm["model"],
            temperature=llm["temperature"], max_tokens=llm["max_tokens"],
            timeout=llm["timeout"], retries=llm["retries"], backoff=llm["backoff"],
            credential_env=llm["credential_env"]))
    drafts = generate_batch(requests_, permissive=generation["permissive"], client=client,
                            max_in_flight=generation["max_in_flight"])

    out = _resolve_out(args)
    lines = [json.dumps(_draft_payload(d), sort_keys=True) for d in drafts]
    (out / "drafts.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    _write_snapshot(out, "generate", config, {
        "tokens_file": args.tokens_file,
        "dataset": args.dataset,
        "model": args.model,
        "templates": args.templates,
    })
    for draft in drafts:
        print(f"{draft.id}\t{draft.text}")
    return 0


def _read_system(spec: str) -> tuple[str, dict[str, str]]:
    name, sep, path = spec.partition("=")
    if not sep:
        name, path = Path(spec).stem, spec
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read system output {path}: {exc}") from exc
    drafts: dict[str, str] = {}
    order: list[str] = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{number}: {exc}") from exc
        if not isinstance(payload, dict) or not isinstance(payload.get("id"), str) \
                or not isinstance(payload.get("text"), str):
            raise InputError(f"{path}:{number}: expected an object with id and text")
        if payload["id"] not in drafts:
            order.append(payload["id"])
        drafts[payload["id"]] = payload["text"]
    if not drafts:
        raise InputError(f"{path} contains no drafts")
    return name, {i: drafts[i] for i in order}


def cmd_evaluate(args) -> int:
    config = load_config(args.config)
    section = config["evaluate"]
    if args.k is not None:
        section["k"] = args.k
    if args.seed is not None:
        section["seed"] = args.seed
    if not args.system:
        raise InputError("evaluate needs at least one --system")
    if len(args.system) > 2:
        raise InputError("evaluate compares at most two systems")

    ingest = ingest_annotations(args.dataset)
    references = {req.id: req.text for req in ingest.requirements}
    systems = [_read_system(spec) for spec in args.system]
    for name, drafts in systems:
        missing = [i for i in drafts if i not in references]
        if missing:
            raise InputError(
                f"system {name} has ids not in the dataset: {', '.join(missing[:5])}")

    out = _resolve_out(args)
    reports = {}
    for name, drafts in systems:
        samples = [(i, text, [references[i]]) for i, text in drafts.items()]
        report = build_report(
            samples,
            config={"dataset": args.dataset, "system": name,
                    "sampler": config["sampler"]["kind"], "seed": section["seed"],
                    "nist_order": section["nist_order"],
                    "meteor": {"alpha": section["meteor_alpha"],
                               "beta": section["meteor_beta"],
                               "gamma": section["meteor_gamma"]}},
            meteor_alpha=section["meteor_alpha"], meteor_beta=section["meteor_beta"],
            meteor_gamma=section["meteor_gamma"], nist_order=section["nist_order"])
        reports[name] = report
        write_report_json(report, out / f"report_{name}.json")
        write_report_csv(report, out / f"report_{name}.csv")

    for name, report in reports.items():
        print(f"system {name} (means, x100 except raw NIST):")
        for metric in METRIC_NAMES:
            value = report.aggregates[metric]
            if metric == "nist":
                print(f"  {metric:7s} {value:8.4f} raw  {value * 100:9.2f} (scaled x100)")
            else:
                print(f"  {metric:7s} {value * 100:8.2f}")

    if len(systems) == 2:
        (name_a, drafts_a), (name_b, drafts_b) = systems
        if set(drafts_a) != set(drafts_b):
            raise InputError("paired comparison needs identical id sets in both systems")
        common = [i for i in drafts_a]
        report_a, report_b = reports[name_a], reports[name_b]
        index_b = {s.id: s for s in report_b.per_sample}
        tests = []
        for metric in METRIC_NAMES:
            a_scores = [s.by_name(metric) for s in report_a.per_sample]
            b_scores = [index_b[i].by_name(metric) for i in common]
            tests.append(mann_whitney_one_tailed(
                a_scores, b_scores, metric=metric, direction=f"{name_a}>{name_b}"))
        adjusted = holm_adjust([t.p_value for t in tests])
        for test, p_holm in zip(tests, adjusted):
            test.p_holm = p_holm
        stats_payload = [
            {
                "metric": t.metric,
                "direction": t.direction,
                "n_a": t.n_a,
                "n_b": t.n_b,
                "u_statistic": t.u_statistic,
                "p_value": t.p_value,
                "p_holm": t.p_holm,
                "cohens_d": t.cohens_d,
                "method": t.method,
            }
            for t in tests
        ]
        (out / "stats.json").write_text(
            json.dumps(stats_payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        print(f"paired tests ({name_a} > {name_b}):")
        for t in tests:
            print(f"  {t.metric:7s} U={t.u_statistic:10.1f} p={t.p_value:.4f} "
                  f"p_holm={t.p_holm:.4f} d={t.cohens_d if t.cohens_d is not None else 'n/a'}")

    if section["k"]:
        name_a, drafts_a = systems[0]
        folds = kfold_split(sorted(drafts_a), k=section["k"], seed=section["seed"])
        folds_payload = []
        for fold_index, (train_ids, test_ids) in enumerate(folds):
            entry = {"fold": fold_index, "train_size": len(train_ids),
                     "test_size": len(test_ids), "test_ids": test_ids, "means": {}}
            for name, report in reports.items():
                chosen = [s for s in report.per_sample if s.id in set(test_ids)]
                if chosen:
                    entry["means"][name] = {
                        metric: sum(s.by_name(metric) for s in chosen) / len(chosen)
                        for metric in METRIC_NAMES
                    }
            folds_payload.append(entry)
        (out / "folds.json").write_text(
            json.dumps(folds_payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        sizes = ", ".join(str(len(test)) for _, test in folds)
        print(f"{section['k']}-fold test sizes: {sizes}")

    _write_snapshot(out, "evaluate", config, {
        "dataset": args.dataset,
        "systems": list(args.system),
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reqdraft",
        description="Draft functional requirements from feature tokens with variable templates.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    induce = commands.add_parser("induce", help="induce templates from an annotated corpus")
    induce.add_argument("--corpus", required=True)
    induce.add_argument("--config")
    induce.add_argument("--min-support", type=int)
    induce.add_argument("--seed", type=int)
    induce.add_argument("--out")
    induce.set_defaults(func=cmd_induce)

    train_cmd = commands.add_parser("train", help="train the recommender")
    train_cmd.add_argument("--instances", required=True)
    train_cmd.add_argument("--templates")
    train_cmd.add_argument("--config")
    train_cmd.add_argument("--seed", type=int)
    train_cmd.add_argument("--epochs", type=int)
    train_cmd.add_argument("--feature-dim", type=int)
    train_cmd.add_argument("--out")
    train_cmd.set_defaults(func=cmd_train)

    recommend = commands.add_parser("recommend", help="recommend a template variant")
    recommend.add_argument("tokens_file")
    recommend.add_argument("--model")
    recommend.add_argument("--templates")
    recommend.add_argument("--config")
    recommend.add_argument("--force-template", type=int)
    recommend.add_argument("--force-tags")
    recommend.add_argument("--prune-empty-slots", action="store_true")
    recommend.add_argument("--out")
    recommend.set_defaults(func=cmd_recommend)

    generate = commands.add_parser("generate", help="generate requirement drafts")
    generate.add_argument("tokens_file", nargs="?")
    generate.add_argument("--dataset")
    generate.add_argument("--sampler", choices=("t1", "t2", "t3"))
    generate.add_argument("--model")
    generate.add_argument("--templates")
    generate.add_argument("--config")
    generate.add_argument("--mode", choices=("realizer", "llm"))
    generate.add_argument("--permissive", action="store_true")
    generate.add_argument("--prune-empty-slots", action="store_true")
    generate.add_argument("--seed", type=int)
    generate.add_argument("--out")
    generate.set_defaults(func=cmd_generate)

    evaluate = commands.add_parser("evaluate", help="score drafts against references")
    evaluate.add_argument("--dataset", required=True)
    evaluate.add_argument("--system", action="append",
                          help="NAME=PATH of a drafts JSONL; repeat for a paired comparison")
    evaluate.add_argument("--config")
    evaluate.add_argument("--k", type=int)
    evaluate.add_argument("--seed", type=int)
    evaluate.add_argument("--out")
    evaluate.set_defaults(func=cmd_evaluate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ReqdraftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
