"""Partial-credit scoring of recovered piece orders against ground truth."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


def _check_pair(found: Sequence[int], correct: Sequence[int]) -> int:
    n = len(found)
    if len(correct) != n:
        raise ValueError("found and correct orders differ in length")
    if sorted(found) != list(range(n)) or sorted(correct) != list(range(n)):
        raise ValueError("orders must be permutations of 0..n-1")
    return n


def sub_block_matches(found: Sequence[int], correct: Sequence[int], block_len: int) -> int:
    """Count contiguous runs of ``block_len`` pieces appearing in both orders.

    Every start offset in ``found`` is compared against every start offset
    in ``correct``, so a correctly assembled run earns credit wherever it
    ended up.
    """
    n = _check_pair(found, correct)
    if not 1 <= block_len <= n:
        raise ValueError("block_len must lie in 1..n")
    found = tuple(found)
    correct = tuple(correct)
    count = 0
    for i in range(n - block_len + 1):
        block = found[i : i + block_len]
        for j in range(n - block_len + 1):
            if correct[j : j + block_len] == block:
                count += 1
    return count


def accuracy(found: Sequence[int], correct: Sequence[int]) -> float:
    """Length-weighted fraction of shared contiguous runs, in [0, 1].

    Each run length n contributes sub_block_matches * n, normalized by the
    maximum attainable sum over all lengths.  1.0 exactly when the orders
    are identical; a lone swap still scores partial credit because short
    runs elsewhere survive.
    """
    n = _check_pair(found, correct)
    earned = 0
    possible = 0
    for block_len in range(1, n + 1):
        earned += sub_block_matches(found, correct, block_len) * block_len
        possible += (n - block_len + 1) * block_len
    return earned / possible


@dataclass(frozen=True)
class AccuracyReport:
    """Per-frame scores with their mean and sample standard deviation."""

    per_frame: tuple[float, ...]
    mean: float
    std: float


def summarize_accuracy(per_frame: Sequence[float]) -> AccuracyReport:
    """Aggregate per-frame accuracies; std is 0 for fewer than two frames."""
    scores = tuple(float(v) for v in per_frame)
    if not scores:
        raise ValueError("no frame scores given")
    mean = sum(scores) / len(scores)
    if len(scores) < 2:
        std = 0.0
    else:
        std = math.sqrt(sum((v - mean) ** 2 for v in scores) / (len(scores) - 1))
    return AccuracyReport(scores, mean, std)
