import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reqdraft.corpus import TagSequence
from reqdraft.errors import TemplateError
from reqdraft.tags import (
    ARG0,
    ARG1,
    ARG2,
    ARGM_BNF,
    ARGM_LOC,
    ARGM_PRP,
    ARGM_TMP,
    REL,
    parse_tag,
)
from reqdraft.templates import (
    DEFAULT_INVENTORY,
    DEFAULT_TEMPLATES,
    TEMPLATE_1,
    TEMPLATE_2,
    count_variants,
    enumerate_variant_strings,
    induce_templates,
    matches,
    normalize_modals,
    parse_template_line,
    parse_templates_text,
    render_templates_text,
)

INVENTORY_TAGS = (ARG2, ARGM_PRP, ARGM_TMP, ARGM_LOC, ARGM_BNF)


def seq(*tags, modal="shall"):
    return TagSequence(tags=tuple(tags), modal=modal)


# --- parsing and rendering ---

def test_default_templates_render_exactly():
    assert TEMPLATE_1.render() == "1: [Arg2]*[Arg0][shall][V][Arg1][variable part]*"
    assert TEMPLATE_2.render() == "2: [Arg2]*[Arg1][shall][V][variable part]*"


def test_parse_render_round_trip():
    for template in DEFAULT_TEMPLATES:
        assert parse_template_line(template.render()) == template


def test_parse_templates_text_skips_blank_and_comment_lines():
    text = "# inventory: default\n\n" + render_templates_text(list(DEFAULT_TEMPLATES))
    assert parse_templates_text(text) == list(DEFAULT_TEMPLATES)


def test_render_templates_text_round_trip():
    text = render_templates_text(list(DEFAULT_TEMPLATES))
    assert render_templates_text(parse_templates_text(text)) == text


def test_parse_rejects_missing_modal():
    with pytest.raises(TemplateError):
        parse_template_line("1: [Arg0][V][Arg1]")


def test_parse_rejects_missing_predicate():
    with pytest.raises(TemplateError):
        parse_template_line("1: [Arg0][shall][Arg1]")


def test_parse_rejects_variable_part_not_last():
    with pytest.raises(TemplateError):
        parse_template_line("1: [variable part]*[Arg0][shall][V]")


def test_parse_rejects_optional_prefix_after_start():
    with pytest.raises(TemplateError):
        parse_template_line("1: [Arg0][Arg2]*[shall][V]")


def test_parse_rejects_unnumbered_line():
    with pytest.raises(TemplateError):
        parse_template_line("[Arg0][shall][V]")


def test_parse_accepts_minimal_backbone():
    template = parse_template_line("7: [Arg0][shall][V]")
    assert template.id == 7
    assert not template.has_opt_prefix
    assert not template.has_variable_part


# --- modal normalization ---

def test_normalize_modals_rewrites_to_shall():
    assert normalize_modals(seq(ARG0, REL, modal="must")).modal == "shall"
    assert normalize_modals(seq(ARG0, REL, modal="will")).modal == "shall"


def test_normalize_modals_is_idempotent():
    once = normalize_modals(seq(ARG0, REL, modal="should"))
    assert normalize_modals(once) == once


def test_normalize_modals_leaves_tags_alone():
    s = seq(ARG0, REL, ARG1, modal="must")
    assert normalize_modals(s).tags == s.tags


# --- matching ---

def test_template1_matches_plain_svo():
    binding = matches(TEMPLATE_1, seq(ARG0, REL, ARG1))
    assert binding is not None
    assert not binding.opt_prefix_bound
    assert binding.variable_tags == ()


def test_template1_matches_with_prefix_and_tail():
    binding = matches(TEMPLATE_1, seq(ARG2, ARG0, REL, ARG1, ARGM_TMP, ARGM_LOC))
    assert binding is not None
    assert binding.opt_prefix_bound
    assert binding.variable_tags == (ARGM_TMP, ARGM_LOC)


def test_template1_accepts_repeated_objects():
    binding = matches(TEMPLATE_1, seq(ARG0, REL, ARG1, ARG1, ARG1, ARGM_PRP))
    assert binding is not None
    assert binding.fixed_counts == (1, 1, 3)


def test_template1_rejects_missing_subject():
    assert matches(TEMPLATE_1, seq(REL, ARG1)) is None


def test_template2_matches_fronted_object():
    binding = matches(TEMPLATE_2, seq(ARG1, REL, ARGM_TMP))
    assert binding is not None
    assert binding.variable_tags == (ARGM_TMP,)


def test_template2_rejects_svo():
    assert matches(TEMPLATE_2, seq(ARG0, REL, ARG1)) is None


def test_match_requires_full_consumption():
    assert matches(TEMPLATE_1, seq(ARG0, REL, ARG1, ARG0)) is None


def test_match_rejects_other_tags():
    assert matches(TEMPLATE_1, seq(ARG0, REL, ARG1, parse_tag("ARGM-DIS"))) is None


# --- variant counting ---

def test_count_variants_total_is_1304():
    assert count_variants(list(DEFAULT_TEMPLATES)) == 1304


def test_count_variants_per_template_is_652():
    assert count_variants([TEMPLATE_1]) == 652
    assert count_variants([TEMPLATE_2]) == 652


def test_enumeration_agrees_with_closed_form():
    rendered = enumerate_variant_strings(list(DEFAULT_TEMPLATES))
    assert len(rendered) == 1304


def test_count_variants_two_tag_inventory_example():
    inventory = frozenset({ARGM_TMP, ARGM_LOC})
    assert count_variants([TEMPLATE_2], inventory=inventory) == 10  # 2 * (1 + 2 + 2)


def test_count_variants_rejects_repeated_tags():
    with pytest.raises(NotImplementedError):
        count_variants(list(DEFAULT_TEMPLATES), max_occurrence=2)


def test_variant_strings_are_distinct_across_templates():
    s1 = enumerate_variant_strings([TEMPLATE_1])
    s2 = enumerate_variant_strings([TEMPLATE_2])
    assert len(s1) == 652 and len(s2) == 652
    assert not (s1 & s2)


@given(st.integers(min_value=0, max_value=5))
@settings(max_examples=6, deadline=None)
def test_closed_form_matches_enumeration_for_any_inventory_size(size):
    inventory = frozenset(INVENTORY_TAGS[:size])
    closed = count_variants(list(DEFAULT_TEMPLATES), inventory=inventory)
    rendered = enumerate_variant_strings(list(DEFAULT_TEMPLATES), inventory=inventory)
    assert closed == len(rendered)


# --- induction ---

def test_induction_folds_diverging_tails_into_variable_part():
    sequences = [seq(ARG0, REL, ARG1, ARGM_TMP), seq(ARG0, REL, ARG1, ARGM_LOC)]
    report = induce_templates(sequences, min_support=1)
    assert len(report.templates) == 1
    template = report.templates[0]
    assert template.has_variable_part
    assert not report.uncovered
    assert any(event.category == 2 for event in report.merge_log)


def test_induction_absorbs_proper_prefix():
    sequences = [seq(ARG0, REL), seq(ARG0, REL), seq(ARG0, REL, ARG1)]
    report = induce_templates(sequences, min_support=2)
    assert len(report.templates) == 1
    assert report.templates[0].has_variable_part
    assert not report.uncovered
    assert any(event.category == 3 for event in report.merge_log)


def test_induction_logs_modal_standardization():
    sequences = [seq(ARG0, REL, ARG1, modal="must"),
                 seq(ARG0, REL, ARG1, modal="shall")]
    report = induce_templates(sequences, min_support=1)
    assert any(event.category == 1 for event in report.merge_log)


def test_induction_uniform_residue_becomes_fixed_slot():
    sequences = [seq(ARG0, REL, ARG1, ARGM_TMP), seq(ARG0, REL, ARG1, ARGM_TMP)]
    report = induce_templates(sequences, min_support=1)
    assert len(report.templates) == 1
    rendered = report.templates[0].render()
    assert "[ArgM-TMP]" in rendered
    assert "[variable part]" not in rendered


def test_induction_some_not_all_prefix_is_optional():
    sequences = [seq(ARG2, ARG0, REL, ARG1), seq(ARG0, REL, ARG1)]
    report = induce_templates(sequences, min_support=1)
    assert "[Arg2]*" in report.templates[0].render()


def test_induction_universal_prefix_is_mandatory():
    sequences = [seq(ARG2, ARG0, REL, ARG1), seq(ARG2, ARG0, REL, ARG1)]
    report = induce_templates(sequences, min_support=1)
    rendered = report.templates[0].render()
    assert "[Arg2]" in rendered and "[Arg2]*" not in rendered


def test_induction_below_min_support_is_uncovered():
    sequences = [seq(ARG0, REL, ARG1), seq(ARG0, REL, ARG1), seq(ARG1, REL)]
    report = induce_templates(sequences, min_support=2)
    assert len(report.templates) == 1
    assert len(report.uncovered) == 1
    assert report.uncovered[0][0].tags == (ARG1, REL)
    assert report.covered == 2


def test_induction_other_tags_are_uncovered():
    sequences = [seq(ARG0, REL, ARG1),
                 seq(ARG0, REL, parse_tag("ARGM-DIS"))]
    report = induce_templates(sequences, min_support=1)
    assert any(any(t.is_other for t in s.tags) for s, _ in report.uncovered)


def test_induction_stem_without_predicate_is_uncovered():
    sequences = [seq(ARG0, ARG1), seq(ARG0, ARG1)]
    report = induce_templates(sequences, min_support=1)
    assert not report.templates
    assert report.covered == 0


def test_induction_counts_add_up():
    sequences = [seq(ARG0, REL, ARG1)] * 5 + [seq(ARG1, REL)] * 3 + [seq(ARG0, ARG1)]
    report = induce_templates(sequences, min_support=2)
    assert report.total_sequences == 9
    assert report.covered == 8


def test_induction_recovers_both_default_templates():
    rng = random.Random(3)
    modals = ["must", "will", "should", "shall"]
    sequences = []
    for _ in range(240):
        fronted = rng.random() < 0.4
        base = [ARG1, REL] if fronted else [ARG0, REL, ARG1]
        if rng.random() < 0.5:
            base = [ARG2] + base
        tail = rng.sample(INVENTORY_TAGS, rng.randrange(0, 4))
        sequences.append(seq(*base, *tail, modal=rng.choice(modals)))
    report = induce_templates(sequences, min_support=2)
    assert render_templates_text(report.templates) == render_templates_text(
        list(DEFAULT_TEMPLATES))
    assert not report.uncovered


def test_induction_is_input_order_invariant():
    rng = random.Random(9)
    sequences = []
    for _ in range(60):
        fronted = rng.random() < 0.5
        base = [ARG1, REL] if fronted else [ARG0, REL, ARG1]
        if rng.random() < 0.4:
            base = [ARG2] + base
        tail = rng.sample(INVENTORY_TAGS, rng.randrange(0, 3))
        sequences.append(seq(*base, *tail))
    baseline = induce_templates(sequences, min_support=2)
    for trial in range(5):
        shuffled = sequences[:]
        random.Random(trial).shuffle(shuffled)
        report = induce_templates(shuffled, min_support=2)
        assert render_templates_text(report.templates) == render_templates_text(
            baseline.templates)
        assert sorted((s.tags, f) for s, f in report.uncovered) == sorted(
            (s.tags, f) for s, f in baseline.uncovered)


def test_induced_templates_cover_their_inputs():
    sequences = [seq(ARG0, REL, ARG1, ARGM_TMP), seq(ARG0, REL, ARG1, ARGM_BNF),
                 seq(ARG2, ARG0, REL, ARG1)]
    report = induce_templates(sequences, min_support=1)
    for s in sequences:
        assert any(matches(t, normalize_modals(s)) for t in report.templates)


def test_induction_ids_are_ordinal_from_one():
    sequences = [seq(ARG0, REL, ARG1), seq(ARG1, REL)]
    report = induce_templates(sequences, min_support=1)
    assert [t.id for t in report.templates] == [1, 2]
