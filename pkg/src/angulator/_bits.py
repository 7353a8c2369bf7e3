"""Bitmask helpers shared by the enumeration and checking code.

Subsets of a model's objects are encoded as integers: bit ``i`` is the
``i``-th object in canonical order.
"""
from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, starting with ``mask`` itself and ending at 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def dtype_for(nbits: int):
    if nbits <= 31:
        return np.int32
    if nbits <= 63:
        return np.int64
    raise ValueError("too many objects for a numpy bitmask table")


def union_table(masks: Sequence[int], dtype=None) -> np.ndarray:
    """``table[S]`` is the bitwise OR of ``masks[i]`` over the bits ``i`` of ``S``.

    Built by doubling: the upper half of each block is the lower half with
    one more mask OR-ed in.
    """
    n = len(masks)
    if dtype is None:
        dtype = dtype_for(max([n] + [m.bit_length() for m in masks]))
    table = np.zeros(1 << n, dtype=dtype)
    for i, m in enumerate(masks):
        half = 1 << i
        np.bitwise_or(table[:half], dtype(m), out=table[half : 2 * half])
    return table
