"""Variable requirement templates: model, matching, counting, induction.

A template is an ordered backbone of slots. Rendered in the line format used
throughout (ids are ordinal)::

    1: [Arg2]*[Arg0][shall][V][Arg1][variable part]*
    2: [Arg2]*[Arg1][shall][V][variable part]*

``*`` marks an optional element: the leading conditional prefix may be absent,
and the trailing variable part holds zero or more tags from the variable-part
inventory, each at most once, in any order.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations

from .corpus import TagSequence
from .errors import TemplateError
from .tags import ARG0, ARG1, ARG2, ARGM_BNF, ARGM_LOC, ARGM_PRP, ARGM_TMP, REL, SrlTag, parse_tag, tag_order


class SlotKind(Enum):
    FIXED = "fixed"
    MODAL = "modal"
    OPT_PREFIX = "opt_prefix"
    VARIABLE_PART = "variable_part"


@dataclass(frozen=True)
class Slot:
    kind: SlotKind
    tag: SrlTag | None = None

    def render(self) -> str:
        if self.kind is SlotKind.MODAL:
            return "[shall]"
        if self.kind is SlotKind.VARIABLE_PART:
            return "[variable part]*"
        if self.kind is SlotKind.OPT_PREFIX:
            return f"[{self.tag.display}]*"
        return f"[{self.tag.display}]"


def fixed(tag: SrlTag) -> Slot:
    return Slot(SlotKind.FIXED, tag)


MODAL_SLOT = Slot(SlotKind.MODAL)
VARIABLE_SLOT = Slot(SlotKind.VARIABLE_PART)


def opt_prefix(tag: SrlTag) -> Slot:
    return Slot(SlotKind.OPT_PREFIX, tag)


@dataclass(frozen=True)
class VariableTemplate:
    id: int
    slots: tuple[Slot, ...]

    def __post_init__(self) -> None:
        kinds = [s.kind for s in self.slots]
        if kinds.count(SlotKind.MODAL) != 1:
            raise TemplateError("template must contain exactly one modal slot")
        rel_positions = [i for i, s in enumerate(self.slots)
                         if s.kind is SlotKind.FIXED and s.tag == REL]
        if len(rel_positions) != 1:
            raise TemplateError("template must contain exactly one fixed predicate slot")
        if kinds.index(SlotKind.MODAL) > rel_positions[0]:
            raise TemplateError("modal slot must precede the predicate slot")
        if kinds.count(SlotKind.OPT_PREFIX) > 1 or (
                SlotKind.OPT_PREFIX in kinds and kinds[0] is not SlotKind.OPT_PREFIX):
            raise TemplateError("at most one optional prefix, and it must lead")
        if kinds.count(SlotKind.VARIABLE_PART) > 1 or (
                SlotKind.VARIABLE_PART in kinds and kinds[-1] is not SlotKind.VARIABLE_PART):
            raise TemplateError("at most one variable part, and it must trail")

    @property
    def has_opt_prefix(self) -> bool:
        return any(s.kind is SlotKind.OPT_PREFIX for s in self.slots)

    @property
    def has_variable_part(self) -> bool:
        return any(s.kind is SlotKind.VARIABLE_PART for s in self.slots)

    def render(self) -> str:
        return f"{self.id}: " + "".join(s.render() for s in self.slots)


# Default variable-part inventory: the conditional argument plus the four
# adjunct modifiers observed to float across requirement tails.
DEFAULT_INVENTORY = frozenset({ARG2, ARGM_PRP, ARGM_TMP, ARGM_LOC, ARGM_BNF})

TEMPLATE_1 = VariableTemplate(1, (
    opt_prefix(ARG2), fixed(ARG0), MODAL_SLOT, fixed(REL), fixed(ARG1), VARIABLE_SLOT,
))
TEMPLATE_2 = VariableTemplate(2, (
    opt_prefix(ARG2), fixed(ARG1), MODAL_SLOT, fixed(REL), VARIABLE_SLOT,
))
DEFAULT_TEMPLATES = (TEMPLATE_1, TEMPLATE_2)

_SLOT_RE = re.compile(r"\[([^\]]+)\](\*?)")


def parse_template_line(line: str) -> VariableTemplate:
    """Parse one rendered template line back into a VariableTemplate."""
    head, sep, body = line.partition(":")
    if not sep:
        raise TemplateError(f"template line lacks an id: {line!r}")
    try:
        template_id = int(head.strip())
    except ValueError as exc:
        raise TemplateError(f"template id is not an integer: {head!r}") from exc
    slots: list[Slot] = []
    consumed = 0
    for match in _SLOT_RE.finditer(body):
        if body[consumed:match.start()].strip():
            raise TemplateError(f"unexpected text in template line: {line!r}")
        consumed = match.end()
        inner, star = match.group(1).strip(), match.group(2) == "*"
        if inner.lower() == "shall":
            slots.append(MODAL_SLOT)
        elif inner.lower() == "variable part":
            slots.append(VARIABLE_SLOT)
        else:
            tag = parse_tag(inner)
            if tag.is_other:
                raise TemplateError(f"unknown tag {inner!r} in template line")
            slots.append(opt_prefix(tag) if star else fixed(tag))
    if body[consumed:].strip():
        raise TemplateError(f"unexpected text in template line: {line!r}")
    if not slots:
        raise TemplateError(f"template line has no slots: {line!r}")
    return VariableTemplate(template_id, tuple(slots))


def parse_templates_text(text: str) -> list[VariableTemplate]:
    templates = [parse_template_line(line) for line in text.splitlines()
                 if line.strip() and not line.lstrip().startswith("#")]
    if not templates:
        raise TemplateError("no templates found")
    return templates


def render_templates_text(templates: list[VariableTemplate]) -> str:
    return "\n".join(t.render() for t in templates) + "\n"


def normalize_modals(sequence: TagSequence) -> TagSequence:
    """Rewrite any observed modal to "shall"; idempotent."""
    if sequence.modal is None or sequence.modal == "shall":
        return sequence
    return TagSequence(tags=sequence.tags, modal="shall")


@dataclass(frozen=True)
class TemplateBinding:
    """How a tag sequence instantiates a template."""

    template: VariableTemplate
    opt_prefix_bound: bool
    fixed_counts: tuple[int, ...]
    variable_tags: tuple[SrlTag, ...]


def matches(template: VariableTemplate, sequence: TagSequence,
            inventory: frozenset[SrlTag] | None = None) -> TemplateBinding | None:
    """Match a sequence against a template; None when it is not an instance.

    The optional prefix may bind or stay empty, the fixed object slot accepts
    repeats (coordinated objects annotate as several ARG1 spans), and the
    variable part consumes trailing inventory tags. The modal word itself is
    not part of the tag sequence and is ignored here.
    """
    inv = DEFAULT_INVENTORY if inventory is None else frozenset(inventory)
    tags = sequence.tags
    i = 0
    opt_bound = False
    fixed_counts: list[int] = []
    variable_tags: tuple[SrlTag, ...] = ()
    for slot in template.slots:
        if slot.kind is SlotKind.MODAL:
            continue
        if slot.kind is SlotKind.OPT_PREFIX:
            if i < len(tags) and tags[i] == slot.tag:
                opt_bound = True
                i += 1
        elif slot.kind is SlotKind.FIXED:
            if i >= len(tags) or tags[i] != slot.tag:
                return None
            count = 1
            i += 1
            if slot.tag == ARG1:
                while i < len(tags) and tags[i] == ARG1:
                    count += 1
                    i += 1
            fixed_counts.append(count)
        else:  # VARIABLE_PART
            taken = []
            while i < len(tags) and tags[i] in inv:
                taken.append(tags[i])
                i += 1
            variable_tags = tuple(taken)
    if i != len(tags):
        return None
    return TemplateBinding(template, opt_bound, tuple(fixed_counts), variable_tags)


def count_variants(templates: list[VariableTemplate],
                   inventory: frozenset[SrlTag] | None = None,
                   max_occurrence: int = 1) -> int:
    """Closed-form count of distinct template variants.

    Per template: (prefix present or absent) x (1 empty variable part
    + sum over k of ordered k-arrangements of the inventory).
    """
    if max_occurrence != 1:
        raise NotImplementedError("only max_occurrence=1 (each tag at most once) is supported")
    inv = DEFAULT_INVENTORY if inventory is None else frozenset(inventory)
    n = len(inv)
    total = 0
    for template in templates:
        prefix_choices = 2 if template.has_opt_prefix else 1
        if template.has_variable_part:
            variable_choices = 1 + sum(math.perm(n, k) for k in range(1, n + 1))
        else:
            variable_choices = 1
        total += prefix_choices * variable_choices
    return total


def enumerate_variant_strings(templates: list[VariableTemplate],
                              inventory: frozenset[SrlTag] | None = None) -> set[str]:
    """Brute-force route: render every variant skeleton, return the distinct set."""
    inv = DEFAULT_INVENTORY if inventory is None else frozenset(inventory)
    ordered_inv = sorted(inv, key=tag_order)
    rendered: set[str] = set()
    for template in templates:
        prefix_options = (False, True) if template.has_opt_prefix else (False,)
        arrangements = [()]
        if template.has_variable_part:
            arrangements = [perm for k in range(len(ordered_inv) + 1)
                            for perm in permutations(ordered_inv, k)]
        for with_prefix in prefix_options:
            for arrangement in arrangements:
                parts = []
                for slot in template.slots:
                    if slot.kind is SlotKind.OPT_PREFIX:
                        if with_prefix:
                            parts.append(f"[{slot.tag.display}]")
                    elif slot.kind is SlotKind.MODAL:
                        parts.append("[shall]")
                    elif slot.kind is SlotKind.FIXED:
                        parts.append(f"[{slot.tag.display}]")
                    else:
                        parts.extend(f"[{t.display}]" for t in arrangement)
                rendered.add("".join(parts))
    return rendered


@dataclass(frozen=True)
class MergeEvent:
    """One recorded merge. Categories mirror the manual consolidation rules:
    1 = modal standardization, 2 = shared structure with diverging tail,
    3 = proper-prefix absorption."""

    category: int
    inputs: tuple[str, ...]
    output: str
    count: int


@dataclass
class InductionReport:
    templates: list[VariableTemplate]
    inventory: tuple[SrlTag, ...]
    min_support: int
    covered: int
    uncovered: list[tuple[TagSequence, int]]
    merge_log: list[MergeEvent] = field(default_factory=list)

    @property
    def total_sequences(self) -> int:
        return self.covered + sum(freq for _, freq in self.uncovered)


@dataclass
class _Member:
    sequence: TagSequence
    freq: int
    prefixed: bool
    residue: tuple[SrlTag, ...]


def _stem_of(tags: tuple[SrlTag, ...], inv: frozenset[SrlTag]) -> tuple[bool, tuple[SrlTag, ...], tuple[SrlTag, ...]]:
    """Strip one optional leading ARG2, then peel the trailing inventory run."""
    prefixed = False
    core = tags
    if len(core) >= 2 and core[0] == ARG2:
        prefixed = True
        core = core[1:]
    cut = len(core)
    while cut > 0 and core[cut - 1] in inv:
        cut -= 1
    return prefixed, core[:cut], core[cut:]


def _valid_stem(stem: tuple[SrlTag, ...]) -> bool:
    return len(stem) > 0 and sum(1 for t in stem if t == REL) == 1


def _backbone_display(stem: tuple[SrlTag, ...]) -> str:
    parts = []
    for tag in stem:
        if tag == REL:
            parts.append("shall")
        parts.append(f"[{tag.display}]")
    return "".join(parts)


def induce_templates(sequences: list[TagSequence], min_support: int = 2,
                     inventory: frozenset[SrlTag] | None = None) -> InductionReport:
    """Consolidate observed tag sequences into variable templates.

    Procedure: normalize modals; group sequences by their fixed stem (core with
    any leading conditional stripped and the trailing inventory run peeled);
    absorb stems that extend a shorter supported stem (the extension joins the
    variable material); emit one template per surviving group, opening a
    variable part where tails diverge and an optional prefix where the leading
    conditional appears in only part of the group. Sequences carrying unknown
    tags, or whose stem is degenerate or under-supported, are left uncovered.
    """
    if not sequences:
        raise TemplateError("cannot induce templates from an empty sequence list")
    if min_support < 1:
        raise TemplateError("min_support must be at least 1")
    inv = DEFAULT_INVENTORY if inventory is None else frozenset(inventory)

    merge_log: list[MergeEvent] = []

    modal_rewrites: Counter[str] = Counter()
    normalized: list[TagSequence] = []
    for seq in sequences:
        norm = normalize_modals(seq)
        if seq.modal is not None and seq.modal != norm.modal:
            modal_rewrites[seq.modal.lower()] += 1
        normalized.append(norm)
    for modal, freq in sorted(modal_rewrites.items()):
        merge_log.append(MergeEvent(category=1, inputs=(modal,), output="shall", count=freq))

    uncovered: Counter[TagSequence] = Counter()
    counts: Counter[TagSequence] = Counter()
    for norm in normalized:
        if any(t.is_other for t in norm.tags):
            uncovered[norm] += 1
        else:
            counts[norm] += 1

    groups: dict[tuple[SrlTag, ...], list[_Member]] = {}
    for seq, freq in counts.items():
        prefixed, stem, residue = _stem_of(seq.tags, inv)
        if not _valid_stem(stem):
            uncovered[seq] += freq
            continue
        groups.setdefault(stem, []).append(_Member(seq, freq, prefixed, residue))

    # Eligibility for absorbing other stems is judged on pre-merge support so
    # the outcome cannot depend on processing order.
    direct_support = {stem: sum(m.freq for m in members) for stem, members in groups.items()}

    # Absorb proper-prefix extensions: a stem that extends a shorter supported
    # stem folds into it, the extension becoming variable material. Shorter
    # stems go first so chains collapse onto the shortest supported backbone.
    for stem in sorted(groups, key=lambda s: (len(s), _backbone_display(s))):
        if stem not in groups:
            continue
        parents = [p for p in groups
                   if p != stem and len(p) < len(stem) and stem[:len(p)] == p
                   and direct_support[p] >= min_support]
        if not parents:
            continue
        parent = min(parents, key=len)
        extension = stem[len(parent):]
        members = groups.pop(stem)
        for member in members:
            groups[parent].append(
                _Member(member.sequence, member.freq, member.prefixed,
                        extension + member.residue))
        merge_log.append(MergeEvent(
            category=3,
            inputs=(_backbone_display(parent), _backbone_display(stem)),
            output=_backbone_display(parent) + "[variable part]",
            count=sum(m.freq for m in members)))

    templates_out: list[tuple[tuple[Slot, ...], int]] = []
    for stem in list(groups):
        members = groups[stem]
        total = sum(m.freq for m in members)
        if total < min_support:
            for member in members:
                uncovered[member.sequence] += member.freq
            continue

        residues = {m.residue for m in members}
        prefix_freq = sum(m.freq for m in members if m.prefixed)

        slots: list[Slot] = []
        if prefix_freq == total:
            slots.append(fixed(ARG2))
        elif prefix_freq > 0:
            slots.append(opt_prefix(ARG2))
        for tag in stem:
            if tag == REL:
                slots.append(MODAL_SLOT)
            slots.append(fixed(tag))
        if residues == {()}:
            pass  # no tail material observed
        elif len(residues) == 1:
            # A tail observed identically everywhere is fixed, not variable.
            slots.extend(fixed(t) for t in next(iter(residues)))
        else:
            slots.append(VARIABLE_SLOT)
            examples = sorted({m.sequence.display() for m in members})
            merge_log.append(MergeEvent(
                category=2,
                inputs=tuple(examples[:5]),
                output="".join(s.render() for s in slots),
                count=total))
        templates_out.append((tuple(slots), total))

    # Distinct groups can in degenerate corners produce the same slot layout;
    # collapse them before assigning ordinal ids.
    by_slots: dict[tuple[Slot, ...], int] = {}
    for slots_tuple, total in templates_out:
        by_slots[slots_tuple] = by_slots.get(slots_tuple, 0) + total
    ordered = sorted(by_slots.items(),
                     key=lambda kv: (-len(kv[0]), "".join(s.render() for s in kv[0])))
    templates = [VariableTemplate(i + 1, slots) for i, (slots, _) in enumerate(ordered)]
    covered = sum(by_slots.values())

    uncovered_list = sorted(uncovered.items(), key=lambda kv: (-kv[1], kv[0].display()))
    return InductionReport(
        templates=templates,
        inventory=tuple(sorted(inv, key=tag_order)),
        min_support=min_support,
        covered=covered,
        uncovered=uncovered_list,
        merge_log=merge_log,
    )


def induction_report_payload(report: InductionReport) -> dict:
    """JSON-ready view of an induction report."""
    return {
        "templates": [t.render() for t in report.templates],
        "inventory": [t.render() for t in report.inventory],
        "min_support": report.min_support,
        "covered": report.covered,
        "uncovered": [
            {
                "tags": [t.render() for t in seq.tags],
                "modal": seq.modal,
                "display": seq.display(),
                "frequency": freq,
            }
            for seq, freq in report.uncovered
        ],
        "merge_log": [
            {
                "category": e.category,
                "inputs": list(e.inputs),
                "output": e.output,
                "count": e.count,
            }
            for e in report.merge_log
        ],
    }
