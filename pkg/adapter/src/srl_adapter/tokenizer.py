"""Word tokenizer for the annotation records.

Span indices in the emitted JSON refer to this tokenization, so it is part
of the output contract: words (letters, digits, internal apostrophes and
hyphens) are single tokens, every other non-space character is its own
token.
"""
from __future__ import annotations

import re

_TOKEN = re.compile(r"[A-Za-z0-9][A-Za-z0-9'\-]*|[^\sA-Za-z0-9]")


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text)
