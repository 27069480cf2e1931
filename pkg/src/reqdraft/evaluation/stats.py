"""Paired-comparison statistics: one-tailed Mann-Whitney U, Holm, Cohen's d.

The U test enumerates the exact permutation distribution for small samples
(combined n up to 12) and otherwise uses the tie-corrected normal
approximation with a continuity correction. Ranks are midranks throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..errors import InputError

EXACT_LIMIT = 12


def _midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        average = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = average
        i = j + 1
    return ranks


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


@dataclass
class StatTestResult:
    metric: str
    direction: str
    n_a: int
    n_b: int
    u_statistic: float
    p_value: float
    method: str
    cohens_d: float | None = None
    p_holm: float | None = None


def cohens_d(a: list[float], b: list[float]) -> float:
    """Standardized mean difference with the pooled sample deviation."""
    if len(a) < 2 or len(b) < 2:
        raise InputError("cohens_d needs at least two values per group")
    mean_a = sum(a) / len(a)
    mean_b = sum(b) / len(b)
    var_a = sum((x - mean_a) ** 2 for x in a) / (len(a) - 1)
    var_b = sum((x - mean_b) ** 2 for x in b) / (len(b) - 1)
    pooled = ((len(a) - 1) * var_a + (len(b) - 1) * var_b) / (len(a) + len(b) - 2)
    if pooled <= 0.0:
        raise InputError("cohens_d undefined: zero pooled variance")
    return (mean_a - mean_b) / math.sqrt(pooled)


def mann_whitney_one_tailed(a: list[float], b: list[float], metric: str = "",
                            direction: str = "a>b") -> StatTestResult:
    """One-tailed test of whether ``a`` is stochastically greater than ``b``."""
    if not a or not b:
        raise InputError("mann-whitney needs non-empty samples")
    values = list(a) + list(b)
    if not all(math.isfinite(v) for v in values):
        raise InputError("mann-whitney needs finite values")
    n_a, n_b = len(a), len(b)
    ranks = _midranks(values)
    rank_sum_a = sum(ranks[:n_a])
    u = rank_sum_a - n_a * (n_a + 1) / 2.0

    if n_a + n_b <= EXACT_LIMIT:
        method = "exact"
        total = 0
        at_least = 0
        offset = n_a * (n_a + 1) / 2.0
        for subset in combinations(range(len(values)), n_a):
            total += 1
            if sum(ranks[i] for i in subset) - offset >= u - 1e-9:
                at_least += 1
        p = at_least / total
    else:
        method = "normal"
        n = n_a + n_b
        tie_term = 0.0
        seen: dict[float, int] = {}
        for v in values:
            seen[v] = seen.get(v, 0) + 1
        for count in seen.values():
            tie_term += count ** 3 - count
        sigma_sq = (n_a * n_b / 12.0) * ((n + 1) - tie_term / (n * (n - 1)))
        if sigma_sq <= 0.0:
            p = 0.5
        else:
            z = (u - n_a * n_b / 2.0 - 0.5) / math.sqrt(sigma_sq)
            p = _normal_sf(z)

    try:
        d = cohens_d(a, b)
    except InputError:
        d = None
    return StatTestResult(
        metric=metric,
        direction=direction,
        n_a=n_a,
        n_b=n_b,
        u_statistic=u,
        p_value=min(1.0, max(0.0, p)),
        method=method,
        cohens_d=d,
    )


def holm_adjust(p_values: list[float]) -> list[float]:
    """Holm step-down adjusted p-values, returned in the input order."""
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise InputError(f"p-value out of range: {p}")
    m = len(p_values)
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running = 0.0
    for rank, index in enumerate(order):
        running = max(running, min(1.0, (m - rank) * p_values[index]))
        adjusted[index] = running
    return adjusted


def kfold_split(ids: list[str], k: int = 5, seed: int = 0) -> list[tuple[list[str], list[str]]]:
    """Shuffled k-fold partition; returns (train_ids, test_ids) per fold.

    Fold sizes differ by at most one; the union of test folds is exactly the
    input id list.
    """
    if k < 2:
        raise InputError(f"k must be at least 2, got {k}")
    if len(ids) < k:
        raise InputError(f"need at least {k} ids for {k} folds, got {len(ids)}")
    shuffled = [ids[i] for i in np.random.default_rng(seed).permutation(len(ids))]
    base, extra = divmod(len(ids), k)
    folds: list[list[str]] = []
    cursor = 0
    for fold_index in range(k):
        size = base + (1 if fold_index < extra else 0)
        folds.append(shuffled[cursor:cursor + size])
        cursor += size
    splits = []
    for fold_index in range(k):
        test = folds[fold_index]
        train = [i for j, fold in enumerate(folds) if j != fold_index for i in fold]
        splits.append((train, test))
    return splits
