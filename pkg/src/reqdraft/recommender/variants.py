"""Binding tokens into a template to form a concrete variant."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import VariantError
from ..tags import SrlTag
from ..templates import DEFAULT_INVENTORY, SlotKind, VariableTemplate
from .features import FeatureToken


@dataclass(frozen=True)
class VariantSlot:
    """One rendered element: a backbone slot or an appended variable tag."""

    kind: SlotKind
    tag: SrlTag | None
    token: FeatureToken | None


@dataclass(frozen=True)
class TemplateVariant:
    template_id: int
    slots: tuple[VariantSlot, ...]
    rendered: str


def _render(slots: tuple[VariantSlot, ...], prune_empty_slots: bool) -> str:
    parts: list[str] = []
    for entry in slots:
        if entry.kind is SlotKind.MODAL:
            parts.append("[shall]")
        elif entry.kind is SlotKind.VARIABLE_PART and entry.tag is None:
            if not prune_empty_slots:
                parts.append("[variable part]")
        elif entry.token is None:
            if not prune_empty_slots:
                parts.append(f"[{entry.tag.display}]")
        else:
            parts.append(f"[{entry.tag.display}]{entry.token.text}[{entry.tag.display}]")
    return "".join(parts)


def construct_variant(template: VariableTemplate, tokens: list[FeatureToken],
                      tags: list[SrlTag],
                      inventory: frozenset[SrlTag] | None = None,
                      prune_empty_slots: bool = False) -> TemplateVariant:
    """Bind (token, tag) pairs to template slots and render the variant.

    Tokens bind to the first unbound backbone slot carrying their tag, in
    token order; leftovers whose tag belongs to the variable-part inventory
    append to the variable part. Unbound slots render as empty markers (and
    the empty variable-part marker is dropped once anything was appended),
    which keeps the variant shape visible for human correction; pass
    prune_empty_slots to drop the empty markers instead.
    """
    if len(tokens) != len(tags):
        raise VariantError(f"{len(tokens)} tokens but {len(tags)} tags")
    inv = DEFAULT_INVENTORY if inventory is None else frozenset(inventory)

    backbone = [slot for slot in template.slots
                if slot.kind in (SlotKind.FIXED, SlotKind.OPT_PREFIX)]
    bound: dict[int, FeatureToken] = {}
    variable: list[tuple[SrlTag, FeatureToken]] = []
    for token, tag in zip(tokens, tags):
        slot_index = next(
            (i for i, slot in enumerate(backbone) if i not in bound and slot.tag == tag),
            None)
        if slot_index is not None:
            bound[slot_index] = token
        elif tag in inv and template.has_variable_part:
            variable.append((tag, token))
        else:
            raise VariantError(
                f"token {token.text!r} with tag {tag.render()} fits no slot of template {template.id}")

    entries: list[VariantSlot] = []
    backbone_cursor = 0
    for slot in template.slots:
        if slot.kind is SlotKind.MODAL:
            entries.append(VariantSlot(SlotKind.MODAL, None, None))
        elif slot.kind is SlotKind.VARIABLE_PART:
            if variable:
                entries.extend(VariantSlot(SlotKind.VARIABLE_PART, tag, token)
                               for tag, token in variable)
            else:
                entries.append(VariantSlot(SlotKind.VARIABLE_PART, None, None))
        else:
            entries.append(VariantSlot(slot.kind, slot.tag, bound.get(backbone_cursor)))
            backbone_cursor += 1
    slots = tuple(entries)
    return TemplateVariant(
        template_id=template.id,
        slots=slots,
        rendered=_render(slots, prune_empty_slots),
    )
