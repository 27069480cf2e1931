"""Surface overlap metrics: BLEU-n, METEOR, NIST, and the bundled stemmer.

All three are implemented against their standard definitions with the
parameter defaults fixed here, so scores are reproducible without pulling in
a metrics library. Text is tokenized with the package tokenizer (whitespace
plus edge-punctuation splitting).
"""
from __future__ import annotations

import math
from collections import Counter

from ..corpus import tokenize_words
from ..errors import InputError

# NIST brevity exponent: chosen so the factor is 1/2 when the candidate is
# two thirds of the reference length.
_NIST_BETA = math.log(0.5) / math.log(2.0 / 3.0) ** 2

_IRREGULAR = {
    "ran": "run", "sat": "sit", "went": "go", "gone": "go", "made": "make",
    "sent": "send", "held": "hold", "kept": "keep", "met": "meet",
    "found": "find", "built": "build", "shown": "show", "seen": "see",
    "given": "give", "taken": "take", "chose": "choose", "chosen": "choose",
    "wrote": "write", "written": "write", "read": "read", "led": "lead",
    "left": "leave", "lost": "lose", "meant": "mean", "paid": "pay",
    "said": "say", "sold": "sell", "set": "set", "shut": "shut",
    "began": "begin", "begun": "begin", "brought": "bring", "bought": "buy",
    "caught": "catch", "did": "do", "done": "do", "drew": "draw",
    "drawn": "draw", "got": "get", "gave": "give", "knew": "know",
    "known": "know", "ate": "eat", "eaten": "eat", "stored": "store",
}

_VOWELS = set("aeiouy")


def _has_vowel(word: str) -> bool:
    return any(c in _VOWELS for c in word)


def _undouble(word: str) -> str:
    if len(word) >= 2 and word[-1] == word[-2] and word[-1] not in "lsz":
        return word[:-1]
    return word


def stem(word: str) -> str:
    """Light English suffix stripper with a small irregular-verb table.

    Tuned for requirements prose: plural, progressive, past, adverbial, and
    final-e suffixes are peeled so inflected forms of the same verb or noun
    compare equal ("displays"/"displayed"/"displaying" -> "display",
    "ran"/"running" -> "run"). Deterministic by construction.
    """
    word = word.lower()
    if word in _IRREGULAR:
        return _IRREGULAR[word]
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("ies") and len(word) > 4:
        word = word[:-3] + "y"
    elif word.endswith("ss"):
        pass
    elif word.endswith("s") and len(word) > 3:
        word = word[:-1]
    if word.endswith("ing") and len(word) > 5 and _has_vowel(word[:-3]):
        word = _undouble(word[:-3])
    elif word.endswith("ed") and len(word) > 4 and _has_vowel(word[:-2]):
        word = _undouble(word[:-2])
    if word.endswith("ly") and len(word) > 4:
        word = word[:-2]
    if word.endswith("e") and len(word) > 4:
        word = word[:-1]
    return word


def _ngrams(tokens: list[str], k: int) -> Counter:
    return Counter(tuple(tokens[i:i + k]) for i in range(len(tokens) - k + 1))


def _clipped_counts(cand: list[str], refs: list[list[str]], k: int) -> tuple[int, int]:
    cand_counts = _ngrams(cand, k)
    ref_counts = [_ngrams(ref, k) for ref in refs]
    numerator = sum(min(count, max(rc.get(gram, 0) for rc in ref_counts))
                    for gram, count in cand_counts.items())
    return numerator, max(len(cand) - k + 1, 0)


def modified_precision(candidate: str, references: list[str], k: int = 1) -> float:
    """Clipped k-gram precision: each candidate k-gram counts at most as often
    as it appears in the most generous single reference."""
    if k < 1:
        raise InputError(f"ngram order must be >= 1, got {k}")
    if not references or all(not r.strip() for r in references):
        raise InputError("precision needs at least one non-empty reference")
    cand = tokenize_words(candidate)
    refs = [tokenize_words(r) for r in references]
    numerator, denominator = _clipped_counts(cand, refs, k)
    return numerator / denominator if denominator else 0.0


def bleu_n(candidate: str, references: list[str], n: int, smooth: bool = False) -> float:
    """BLEU with clipped modified precision, geometric mean of orders 1..n.

    No smoothing by default (any zero order zeroes the score); ``smooth``
    applies add-one smoothing to orders above 1. Brevity penalty uses the
    closest reference length, ties toward the shorter.
    """
    if n < 1:
        raise InputError(f"bleu order must be >= 1, got {n}")
    if not references or all(not r.strip() for r in references):
        raise InputError("bleu needs at least one non-empty reference")
    cand = tokenize_words(candidate)
    refs = [tokenize_words(r) for r in references]
    if not cand:
        return 0.0

    log_sum = 0.0
    for k in range(1, n + 1):
        numerator, denominator = _clipped_counts(cand, refs, k)
        if smooth and k > 1:
            numerator += 1
            denominator += 1
        if numerator == 0 or denominator == 0:
            return 0.0
        log_sum += math.log(numerator / denominator)
    precision = math.exp(log_sum / n)

    c = len(cand)
    r = min((len(ref) for ref in refs), key=lambda L: (abs(L - c), L))
    brevity = 1.0 if c >= r else math.exp(1.0 - r / c)
    return precision * brevity


def _align(cand: list[str], ref: list[str]) -> list[tuple[int, int]]:
    """Two-stage unigram alignment: exact matches, then stem matches.

    Within each stage candidates are processed left to right; among the free
    reference positions a match prefers the one continuing the current chunk,
    then the leftmost, which keeps the chunk count minimal in practice.
    """
    pairs: list[tuple[int, int]] = []
    cand_free = [True] * len(cand)
    ref_free = [True] * len(ref)
    for keyed_cand, keyed_ref in (
            (cand, ref),
            ([stem(w) for w in cand], [stem(w) for w in ref])):
        last_ref = -1
        for i, word in enumerate(keyed_cand):
            if not cand_free[i]:
                continue
            options = [j for j, other in enumerate(keyed_ref)
                       if ref_free[j] and other == word]
            if not options:
                continue
            j = last_ref + 1 if last_ref + 1 in options else options[0]
            pairs.append((i, j))
            cand_free[i] = False
            ref_free[j] = False
            last_ref = j
    return sorted(pairs)


def _chunks(pairs: list[tuple[int, int]]) -> int:
    count = 0
    previous = None
    for i, j in pairs:
        if previous is None or i != previous[0] + 1 or j != previous[1] + 1:
            count += 1
        previous = (i, j)
    return count


def meteor(candidate: str, reference: str, alpha: float = 0.9,
           beta: float = 3.0, gamma: float = 0.5) -> float:
    """Unigram METEOR with exact-then-stem matching and a fragmentation penalty."""
    cand = [w.lower() for w in tokenize_words(candidate)]
    ref = [w.lower() for w in tokenize_words(reference)]
    if not cand or not ref:
        return 0.0
    pairs = _align(cand, ref)
    m = len(pairs)
    if m == 0:
        return 0.0
    precision = m / len(cand)
    recall = m / len(ref)
    f_mean = precision * recall / (alpha * precision + (1.0 - alpha) * recall)
    penalty = gamma * (_chunks(pairs) / m) ** beta
    return f_mean * (1.0 - penalty)


def _info_weights(reference_lists: list[list[list[str]]], n: int) -> tuple[dict, int]:
    counts: Counter = Counter()
    total_unigrams = 0
    for refs in reference_lists:
        for ref in refs:
            total_unigrams += len(ref)
            for k in range(1, n + 1):
                counts.update(_ngrams(ref, k))
    return counts, total_unigrams


def _info(gram: tuple, counts: Counter, total_unigrams: int) -> float:
    count = counts.get(gram, 0)
    if count == 0:
        return 0.0
    parent = total_unigrams if len(gram) == 1 else counts.get(gram[:-1], 0)
    if parent <= 0:
        return 0.0
    return math.log2(parent / count)


def _nist_brevity(cand_len: float, ref_len: float) -> float:
    if ref_len <= 0:
        return 0.0
    ratio = min(cand_len / ref_len, 1.0)
    if ratio <= 0:
        return 0.0
    return math.exp(_NIST_BETA * math.log(ratio) ** 2)


def nist_n(candidates: list[str], references: list[list[str]], n: int = 5) -> float:
    """Corpus-level NIST: information-weighted k-gram matches, k = 1..n.

    Information weights come from the reference corpus; matches are clipped
    to the best per-reference count. The brevity factor halves the score when
    the candidate corpus shrinks to two thirds of the mean reference length.
    """
    if len(candidates) != len(references):
        raise InputError("candidates and references must align")
    if not candidates or not any(ref for ref in references):
        raise InputError("nist needs a non-empty reference corpus")
    cand_lists = [tokenize_words(c) for c in candidates]
    ref_lists = [[tokenize_words(r) for r in refs] for refs in references]
    counts, total_unigrams = _info_weights(ref_lists, n)

    score = 0.0
    for k in range(1, n + 1):
        gained = 0.0
        attempted = 0
        for cand, refs in zip(cand_lists, ref_lists):
            attempted += max(len(cand) - k + 1, 0)
            cand_counts = _ngrams(cand, k)
            for gram, count in cand_counts.items():
                best_ref = max((_ngrams(ref, k).get(gram, 0) for ref in refs), default=0)
                gained += min(count, best_ref) * _info(gram, counts, total_unigrams)
        if attempted > 0:
            score += gained / attempted

    cand_len = sum(len(c) for c in cand_lists)
    ref_len = sum(sum(len(r) for r in refs) / len(refs) for refs in ref_lists if refs)
    return score * _nist_brevity(cand_len, ref_len)


def nist_per_sample(candidates: list[str], references: list[list[str]], n: int = 5) -> list[float]:
    """Per-sample NIST scores sharing one set of corpus-level info weights.

    Each sample is scored as a one-segment corpus; the information weights
    come from the whole reference corpus so samples are comparable.
    """
    if len(candidates) != len(references):
        raise InputError("candidates and references must align")
    ref_lists = [[tokenize_words(r) for r in refs] for refs in references]
    counts, total_unigrams = _info_weights(ref_lists, n)
    scores = []
    for candidate, refs in zip(candidates, ref_lists):
        cand = tokenize_words(candidate)
        sample = 0.0
        for k in range(1, n + 1):
            attempted = max(len(cand) - k + 1, 0)
            if attempted == 0:
                continue
            gained = 0.0
            for gram, count in _ngrams(cand, k).items():
                best_ref = max((_ngrams(ref, k).get(gram, 0) for ref in refs), default=0)
                gained += min(count, best_ref) * _info(gram, counts, total_unigrams)
            sample += gained / attempted
        mean_ref = sum(len(r) for r in refs) / len(refs) if refs else 0.0
        scores.append(sample * _nist_brevity(len(cand), mean_ref))
    return scores
