from reqdraft.recommender import FeatureToken, constraint_tag, fallback_recommend
from reqdraft.tags import (
    ARG0,
    ARG1,
    ARG2,
    ARGM_BNF,
    ARGM_LOC,
    ARGM_PRP,
    ARGM_TMP,
    REL,
    IsoRole,
)


def tok(text, role, position=0):
    return FeatureToken(text=text, role=role, position=position)


def test_classic_svo_maps_onto_template_one():
    template_id, tags = fallback_recommend([
        tok("The system", IsoRole.SUBJECT, 0),
        tok("display", IsoRole.ACTION, 1),
        tok("alarm status", IsoRole.OBJECT, 2),
    ])
    assert template_id == 1
    assert tags == [ARG0, REL, ARG1]


def test_subject_only_core_switches_to_template_two():
    template_id, tags = fallback_recommend([
        tok("Flight plan", IsoRole.SUBJECT, 0),
        tok("UAV", IsoRole.CONSTRAINT, 1),
    ])
    assert template_id == 2
    assert tags == [ARG1, ARGM_BNF]


def test_subject_with_action_stays_on_template_one():
    template_id, tags = fallback_recommend([
        tok("The recorder", IsoRole.SUBJECT, 0),
        tok("archive", IsoRole.ACTION, 1),
    ])
    assert template_id == 1
    assert tags == [ARG0, REL]


def test_object_without_subject_stays_on_template_one():
    template_id, tags = fallback_recommend([
        tok("the audit log", IsoRole.OBJECT, 0),
        tok("for the crew", IsoRole.CONSTRAINT, 1),
    ])
    assert template_id == 1
    assert tags == [ARG1, ARGM_BNF]


def test_condition_maps_to_arg2():
    _, tags = fallback_recommend([
        tok("if power fails", IsoRole.CONDITION, 0),
        tok("The system", IsoRole.SUBJECT, 1),
        tok("shut down", IsoRole.ACTION, 2),
    ])
    assert tags == [ARG2, ARG0, REL]


def test_constraint_keyword_table():
    assert constraint_tag("to digitally sign an order") == ARGM_PRP
    assert constraint_tag("within 2 seconds") == ARGM_TMP
    assert constraint_tag("after each maneuver") == ARGM_TMP
    assert constraint_tag("before the next cycle") == ARGM_TMP
    assert constraint_tag("when armed") == ARGM_TMP
    assert constraint_tag("while the engine burns") == ARGM_TMP
    assert constraint_tag("during the launch window") == ARGM_TMP
    assert constraint_tag("on the primary bus") == ARGM_LOC
    assert constraint_tag("at the ground station") == ARGM_LOC
    assert constraint_tag("in the control room") == ARGM_LOC
    assert constraint_tag("UAV") == ARGM_BNF
    assert constraint_tag("the maintenance crew") == ARGM_BNF


def test_constraint_keyword_is_case_insensitive():
    assert constraint_tag("Within 2 seconds") == ARGM_TMP
    assert constraint_tag("To sign") == ARGM_PRP


def test_empty_token_list_defaults_to_template_one():
    template_id, tags = fallback_recommend([])
    assert template_id == 1
    assert tags == []
