import importlib.util
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from srl_adapter import (InputError, annotate_line, annotate_tokens,
                         frames_from_prediction, tokenize)
from srl_adapter import cli

SMART_CARD = ("The system shall require a smart card reader, smart card, "
              "and a PIN to digitally sign an order.")

SENTENCES = [
    SMART_CARD,
    "",
    "The fault log shall be archived within two seconds.",
    "If the link drops, the console shall display every fault within two seconds.",
    "The operator station shall store the flight plan in the mission database for the ground crew.",
    "Telemetry archive.",
    "The gateway shall forward packets.",
    "When the sensor fails, the controller shall raise an alarm for the operator.",
    "The report shall be stored in the audit vault.",
    "The scheduler shall dispatch each job within five seconds.",
    "The terminal shall display the fuel level to assist the pilot.",
]


def write_input(path):
    path.write_text("\n".join(SENTENCES) + "\n", encoding="utf-8")
    return path


def spans_by_tag(frame):
    result = {}
    for span in frame["spans"]:
        result.setdefault(span["tag"], []).append((span["start"], span["end"]))
    return result


def test_tokenize_smart_card():
    assert tokenize(SMART_CARD) == [
        "The", "system", "shall", "require", "a", "smart", "card", "reader",
        ",", "smart", "card", ",", "and", "a", "PIN", "to", "digitally",
        "sign", "an", "order", ".",
    ]


def test_tokenize_keeps_hyphens_and_apostrophes():
    assert tokenize("The self-test shall run.") == [
        "The", "self-test", "shall", "run", "."]
    assert tokenize("The pilot's display") == ["The", "pilot's", "display"]


def test_tokenize_splits_punctuation():
    assert tokenize("within 2.5 seconds") == ["within", "2", ".", "5", "seconds"]
    assert tokenize("") == []


def test_smart_card_frame_has_agent_verb_object_purpose():
    tokens, frames = annotate_line(SMART_CARD)
    assert len(frames) == 1
    frame = frames[0]
    assert tokens[frame["predicate_index"]] == "require"
    tags = spans_by_tag(frame)
    assert tags["ARG0"] == [(0, 2)]
    assert tags["V"] == [(3, 4)]
    assert tags["ARG1"] == [(4, 15)]
    assert tags["ARGM-PRP"] == [(15, 20)]
    assert tokens[0:2] == ["The", "system"]
    assert tokens[15:20] == ["to", "digitally", "sign", "an", "order"]


def test_condition_clause_becomes_leading_arg2():
    tokens, frames = annotate_line(
        "If the link drops, the console shall display every fault.")
    tags = spans_by_tag(frames[0])
    assert tags["ARG2"] == [(0, 4)]
    assert tokens[0:4] == ["If", "the", "link", "drops"]
    assert tags["ARG0"] == [(5, 7)]
    assert tags["ARG1"] == [(9, 11)]


def test_passive_subject_becomes_arg1():
    tokens, frames = annotate_line(
        "The fault log shall be archived within two seconds.")
    frame = frames[0]
    assert tokens[frame["predicate_index"]] == "archived"
    tags = spans_by_tag(frame)
    assert tags["ARG1"] == [(0, 3)]
    assert "ARG0" not in tags
    assert tags["ARGM-TMP"] == [(6, 9)]


def test_locative_and_benefactive_modifiers():
    tokens, frames = annotate_line(
        "The operator station shall store the flight plan "
        "in the mission database for the ground crew.")
    tags = spans_by_tag(frames[0])
    assert tags["ARGM-LOC"] == [(8, 12)]
    assert tags["ARGM-BNF"] == [(12, 16)]
    assert tokens[8:12] == ["in", "the", "mission", "database"]


def test_spans_are_sorted_and_non_overlapping():
    _, frames = annotate_line(
        "When the sensor fails, the controller shall raise an alarm for the operator.")
    spans = frames[0]["spans"]
    starts = [span["start"] for span in spans]
    assert starts == sorted(starts)
    for left, right in zip(spans, spans[1:]):
        assert left["end"] <= right["start"]


def test_line_without_modal_yields_no_frames():
    tokens, frames = annotate_line("Telemetry archive.")
    assert tokens == ["Telemetry", "archive", "."]
    assert frames == []


def test_modal_without_predicate_yields_no_frames():
    assert annotate_tokens(["The", "system", "shall", "."]) == []
    assert annotate_tokens(["The", "system", "shall"]) == []


def test_frames_from_prediction_folds_bio_runs():
    prediction = {
        "words": ["The", "system", "shall", "record", "the", "alarm", "."],
        "verbs": [{
            "verb": "record",
            "tags": ["B-ARG0", "I-ARG0", "B-ARGM-MOD", "B-V",
                     "B-ARG1", "I-ARG1", "O"],
        }],
    }
    words, frames = frames_from_prediction(prediction)
    assert words == prediction["words"]
    assert frames == [{
        "predicate_index": 3,
        "spans": [
            {"start": 0, "end": 2, "tag": "ARG0"},
            {"start": 2, "end": 3, "tag": "ARGM-MOD"},
            {"start": 3, "end": 4, "tag": "V"},
            {"start": 4, "end": 6, "tag": "ARG1"},
        ],
    }]


def test_frames_from_prediction_skips_verbless_frames():
    prediction = {
        "words": ["alarm", "history"],
        "verbs": [{"verb": "history", "tags": ["O", "B-ARG1"]}],
    }
    words, frames = frames_from_prediction(prediction)
    assert words == ["alarm", "history"]
    assert frames == []


def test_frames_from_prediction_rejects_misaligned_tags():
    prediction = {"words": ["a", "b"], "verbs": [{"tags": ["B-V"]}]}
    with pytest.raises(InputError):
        frames_from_prediction(prediction)


def test_frames_from_prediction_rejects_missing_words():
    with pytest.raises(InputError):
        frames_from_prediction({"verbs": []})
    with pytest.raises(InputError):
        frames_from_prediction({"words": [], "verbs": []})


def test_cli_round_trip_validates_against_schema(tmp_path):
    infile = write_input(tmp_path / "reqs.txt")
    outfile = tmp_path / "corpus.json"
    assert cli.main(["--in", str(infile), "--out", str(outfile)]) == 0
    payload = json.loads(outfile.read_text(encoding="utf-8"))
    schema = json.loads(
        (Path(cli.__file__).parent / "annotation.schema.json")
        .read_text(encoding="utf-8"))
    jsonschema.validate(payload, schema)
    records = payload["requirements"]
    assert len(records) == 10
    assert [r["id"] for r in records] == [f"req-{n:04d}" for n in range(1, 11)]
    assert records[0]["text"] == SMART_CARD
    assert all(r["text"] for r in records)


def test_cli_output_feeds_primary_pipeline(tmp_path):
    infile = write_input(tmp_path / "reqs.txt")
    outfile = tmp_path / "corpus.json"
    assert cli.main(["--in", str(infile), "--out", str(outfile)]) == 0
    outdir = tmp_path / "induced"
    proc = subprocess.run(
        [sys.executable, "-m", "reqdraft", "induce",
         "--corpus", str(outfile), "--out", str(outdir)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    report = json.loads((outdir / "induction_report.json").read_text())
    assert report["ingest_skipped"] == []
    assert report["covered"] > 0


def test_schema_copy_matches_primary():
    from reqdraft.corpus import annotation_schema
    shipped = json.loads(
        (Path(cli.__file__).parent / "annotation.schema.json")
        .read_text(encoding="utf-8"))
    assert shipped == annotation_schema()


def test_cli_reruns_are_byte_identical(tmp_path):
    infile = write_input(tmp_path / "reqs.txt")
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    assert cli.main(["--in", str(infile), "--out", str(first)]) == 0
    assert cli.main(["--in", str(infile), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_cli_warns_on_frameless_line(tmp_path, capsys):
    infile = write_input(tmp_path / "reqs.txt")
    outfile = tmp_path / "corpus.json"
    assert cli.main(["--in", str(infile), "--out", str(outfile)]) == 0
    captured = capsys.readouterr()
    assert "line 6" in captured.err
    assert "Telemetry archive." in captured.err
    payload = json.loads(outfile.read_text(encoding="utf-8"))
    frameless = [r for r in payload["requirements"] if not r["frames"]]
    assert [r["text"] for r in frameless] == ["Telemetry archive."]


def test_cli_missing_input_exits_2(tmp_path, capsys):
    code = cli.main(["--in", str(tmp_path / "absent.txt"),
                     "--out", str(tmp_path / "out.json")])
    assert code == 2
    assert "input error" in capsys.readouterr().err


def test_cli_blank_input_exits_2(tmp_path, capsys):
    infile = tmp_path / "blank.txt"
    infile.write_text("\n  \n\n", encoding="utf-8")
    code = cli.main(["--in", str(infile), "--out", str(tmp_path / "out.json")])
    assert code == 2
    assert "no requirement lines" in capsys.readouterr().err


def test_cli_unknown_config_key_exits_3(tmp_path, capsys):
    config = tmp_path / "bad.toml"
    config.write_text("[predictor]\nbeckend = 'heuristic'\n", encoding="utf-8")
    infile = write_input(tmp_path / "reqs.txt")
    code = cli.main(["--in", str(infile), "--out", str(tmp_path / "out.json"),
                     "--config", str(config)])
    assert code == 3
    assert "unknown configuration key" in capsys.readouterr().err


def test_cli_wrong_config_type_exits_3(tmp_path, capsys):
    config = tmp_path / "bad.toml"
    config.write_text("[output]\nid_prefix = 7\n", encoding="utf-8")
    infile = write_input(tmp_path / "reqs.txt")
    code = cli.main(["--in", str(infile), "--out", str(tmp_path / "out.json"),
                     "--config", str(config)])
    assert code == 3
    assert "wrong type" in capsys.readouterr().err


def test_cli_config_sets_id_prefix(tmp_path):
    config = tmp_path / "ids.toml"
    config.write_text("[output]\nid_prefix = 'uav'\n", encoding="utf-8")
    infile = write_input(tmp_path / "reqs.txt")
    outfile = tmp_path / "corpus.json"
    assert cli.main(["--in", str(infile), "--out", str(outfile),
                     "--config", str(config)]) == 0
    payload = json.loads(outfile.read_text(encoding="utf-8"))
    assert payload["requirements"][0]["id"] == "uav-0001"
    assert payload["requirements"][9]["id"] == "uav-0010"


@pytest.mark.skipif(importlib.util.find_spec("allennlp") is not None,
                    reason="allennlp is installed")
def test_cli_allennlp_backend_names_install_command(tmp_path, capsys):
    infile = write_input(tmp_path / "reqs.txt")
    code = cli.main(["--in", str(infile), "--out", str(tmp_path / "out.json"),
                     "--backend", "allennlp"])
    assert code == 3
    err = capsys.readouterr().err
    assert "pip install allennlp==2.10.1 allennlp-models==2.10.1" in err


def test_cli_version():
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["--version"])
    assert excinfo.value.code == 0


def test_console_script_is_installed(tmp_path):
    infile = write_input(tmp_path / "reqs.txt")
    outfile = tmp_path / "corpus.json"
    proc = subprocess.run(
        ["srl-annotate", "--in", str(infile), "--out", str(outfile)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "annotated 10 requirements" in proc.stdout
    assert outfile.exists()


def test_adapter_does_not_import_primary_package():
    proc = subprocess.run(
        [sys.executable, "-c",
         "import srl_adapter, sys; sys.exit('reqdraft' in sys.modules)"],
        capture_output=True, text=True)
    assert proc.returncode == 0
