"""Boolean sliding-window co-occurrence counting.

A window of ``width`` tokens slides over each document with step 1; documents
shorter than the width contribute a single window covering the whole
document.  Occurrence is boolean per window.  Counting goes through per-token
window-index intervals (union for occurrence, pairwise intersection for
co-occurrence) instead of materializing each window's token set; the naive
enumeration lives in the test suite as the independent oracle.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from shopminer.errors import ConfigurationError


@dataclass
class WindowStats:
    window_width: int
    total_windows: int = 0
    occurrence: dict = field(default_factory=dict)
    co_occurrence: dict = field(default_factory=dict)  # key (a, b) with a < b

    def occ(self, token) -> int:
        return self.occurrence.get(token, 0)

    def co(self, a, b) -> int:
        if a == b:
            return self.occ(a)
        key = (a, b) if a < b else (b, a)
        return self.co_occurrence.get(key, 0)


def _merged_intervals(positions: Sequence[int], width: int, n_windows: int):
    """Inclusive [lo, hi] window-index intervals containing the token, merged."""
    merged = []
    for p in positions:
        lo = max(0, p - width + 1)
        hi = min(p, n_windows - 1)
        if merged and lo <= merged[-1][1] + 1:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return merged


def _measure(intervals) -> int:
    return sum(hi - lo + 1 for lo, hi in intervals)


def _intersection_measure(a, b) -> int:
    total = 0
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo <= hi:
            total += hi - lo + 1
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return total


def build_window_stats(
    docs: Iterable[Sequence[Hashable]], width: int
) -> WindowStats:
    """Aggregate boolean window occurrence/co-occurrence counts over docs."""
    if width < 1:
        raise ConfigurationError(f"window width must be >= 1, got {width}")
    occurrence: dict = defaultdict(int)
    co: dict = defaultdict(int)
    total_windows = 0

    for doc in docs:
        n = len(doc)
        if n == 0:
            continue
        n_windows = max(1, n - width + 1)
        total_windows += n_windows

        positions: dict = defaultdict(list)
        for p, token in enumerate(doc):
            positions[token].append(p)

        intervals = {
            token: _merged_intervals(pos, width, n_windows)
            for token, pos in positions.items()
        }
        for token, ivals in intervals.items():
            occurrence[token] += _measure(ivals)
        for a, b in combinations(sorted(intervals), 2):
            shared = _intersection_measure(intervals[a], intervals[b])
            if shared:
                co[(a, b)] += shared

    return WindowStats(
        window_width=width,
        total_windows=total_windows,
        occurrence=dict(occurrence),
        co_occurrence=dict(co),
    )
