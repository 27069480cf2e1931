"""Deterministic rule fallback used when no trained model is available."""
from __future__ import annotations

from ..tags import ARG1, ARGM_BNF, ARGM_LOC, ARGM_PRP, ARGM_TMP, ROLE_TO_TAG, IsoRole, SrlTag
from .features import FeatureToken

_TEMPORAL_LEADS = frozenset({"within", "after", "before", "when", "while", "during"})
_LOCATIVE_LEADS = frozenset({"on", "at", "in"})


def constraint_tag(text: str) -> SrlTag:
    """Classify a constraint token by its leading word.

    "to ..." reads as purpose, temporal and locative prepositions as their
    modifiers, and a bare noun phrase as a beneficiary.
    """
    words = text.split()
    lead = words[0].lower() if words else ""
    if lead == "to":
        return ARGM_PRP
    if lead in _TEMPORAL_LEADS:
        return ARGM_TMP
    if lead in _LOCATIVE_LEADS:
        return ARGM_LOC
    return ARGM_BNF


def fallback_recommend(tokens: list[FeatureToken]) -> tuple[int, list[SrlTag]]:
    """Rule-based template choice and tag assignment.

    Template 1 (subject-verb-object) unless the tokens carry no action and no
    object but do carry a subject, in which case the subject-verb template 2
    applies and the subject maps to ARG1.
    """
    roles = {token.role for token in tokens}
    if (IsoRole.ACTION not in roles and IsoRole.OBJECT not in roles
            and IsoRole.SUBJECT in roles):
        template_id = 2
    else:
        template_id = 1
    tags: list[SrlTag] = []
    for token in tokens:
        if token.role is IsoRole.CONSTRAINT:
            tags.append(constraint_tag(token.text))
        elif token.role is IsoRole.SUBJECT and template_id == 2:
            tags.append(ARG1)
        else:
            tags.append(ROLE_TO_TAG[token.role])
    return template_id, tags
