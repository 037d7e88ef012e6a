"""Bitmask helpers. Ground sets are {0, ..., n-1}; bit i is element i."""
from __future__ import annotations

from collections.abc import Iterable, Iterator


def full(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return mask.bit_count()


def elements(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def submasks(mask: int) -> list[int]:
    """Submasks in increasing order; position k is the expansion of index k."""
    out = [0]
    s = 0
    while s != mask:
        s = (s - mask) & mask
        out.append(s)
    return out


def iter_submasks(mask: int) -> Iterator[int]:
    s = 0
    yield 0
    while s != mask:
        s = (s - mask) & mask
        yield s


def compress(sub: int, kept: int) -> int:
    """Index of ``sub`` (a subset of ``kept``) after relabeling ``kept`` to 0..k-1."""
    out = 0
    j = 0
    for i in elements(kept):
        if sub >> i & 1:
            out |= 1 << j
        j += 1
    return out


def expand(sub: int, kept: int) -> int:
    """Inverse of :func:`compress`."""
    out = 0
    for j, i in enumerate(elements(kept)):
        if sub >> j & 1:
            out |= 1 << i
    return out


def shift_in(low: int, high: int, n_low: int) -> int:
    """Disjoint union of a mask on 0..n_low-1 and a mask placed above it."""
    return low | (high << n_low)
