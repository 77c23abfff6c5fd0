"""Prefix-level detection of eventual periodicity.

A verdict only describes the examined prefix; it says nothing certain about
the infinite word, which is why both outcomes carry the bounds used.
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import InsufficientPrefix


@dataclass(frozen=True)
class Found:
    preperiod: int
    period: int
    length: int


@dataclass(frozen=True)
class NoneFound:
    max_preperiod: int
    max_period: int
    length: int


PeriodVerdict = Union[Found, NoneFound]


def _codes(prefix: Sequence) -> np.ndarray:
    table = {}
    return np.fromiter((table.setdefault(x, len(table)) for x in prefix),
                       dtype=np.int64, count=len(prefix))


def detect_eventual_period(prefix: Sequence, max_preperiod: int = 64,
                           max_period: int = 512) -> PeriodVerdict:
    """Least preperiod ``n``, then least period ``p``, consistent with the prefix."""
    N = len(prefix)
    if N < max_preperiod + 2 * max_period:
        raise InsufficientPrefix(
            f"need at least {max_preperiod + 2 * max_period} letters, got {N}"
        )
    x = _codes(prefix)
    # first preperiod compatible with each period: one past the last mismatch
    needed = {}
    for p in range(1, max_period + 1):
        bad = np.flatnonzero(x[:-p] != x[p:])
        needed[p] = int(bad[-1]) + 1 if bad.size else 0
    best = min(needed.values())
    if best > max_preperiod:
        return NoneFound(max_preperiod, max_period, N)
    period = min(p for p, n in needed.items() if n == best)
    return Found(best, period, N)


def holds(prefix: Sequence, verdict: Found) -> bool:
    """Re-check a verdict position by position."""
    n, p = verdict.preperiod, verdict.period
    return all(prefix[i] == prefix[i + p] for i in range(n, len(prefix) - p))
