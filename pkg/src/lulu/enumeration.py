"""Weighted model counting of small monotone constraint systems by brute force.

Variables are bits of an assignment mask; bit ``i`` set means input ``i`` is
``<= t`` (probability ``p``). A *clause* is a bitmask that is satisfied when
it shares a set bit with the assignment. The counted systems are

* ``le``: clauses that must all be satisfied, and
* ``gt``: groups of clauses; each group must be *violated* (not every clause
  in it satisfied).

:func:`count_by_weight` returns ``counts[j]`` = number of satisfying
assignments with exactly ``j`` set bits, from which the probability
polynomial is ``sum_j counts[j] p^j q^(n-j)``.

The sweep splits the mask into high bits (fixed per chunk) and ``LOW_BITS``
low bits (a numpy lane per assignment). Fixing the high bits settles every
clause touching them, so each chunk only evaluates a reduced system; chunks
with the same reduced system share one histogram.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from .errors import CapacityError, enum_cap

LOW_BITS = 20

_low_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _low_lanes(bits: int) -> tuple[np.ndarray, np.ndarray]:
    if bits not in _low_cache:
        lanes = np.arange(1 << bits, dtype=np.int64)
        _low_cache[bits] = (lanes, np.bitwise_count(lanes).astype(np.int64))
    return _low_cache[bits]


def minimize_masks(masks) -> list[int]:
    """Inclusion-minimal masks (drop every mask that contains another)."""
    uniq = sorted(set(masks), key=lambda m: (m.bit_count(), m))
    kept: list[int] = []
    for m in uniq:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def _hit_all(lanes: np.ndarray, clauses: Sequence[int]) -> np.ndarray:
    ok = (lanes & clauses[0]) != 0
    for c in clauses[1:]:
        ok &= (lanes & c) != 0
    return ok


class _Chunker:
    def __init__(self, n: int, le: Sequence[int], gt: Sequence[Sequence[int]]):
        self.n = n
        self.low_bits = min(n, LOW_BITS)
        self.low_mask = (1 << self.low_bits) - 1
        self.le = minimize_masks(le)
        self.gt = [list(g) for g in gt]
        self.memo: dict = {}

    def reduce(self, h: int):
        """Reduced system for high part ``h``; ``None`` if unsatisfiable."""
        shift, lm = self.low_bits, self.low_mask
        hs = h << shift
        le = []
        for c in self.le:
            if c & hs:
                continue
            cl = c & lm
            if cl == 0:
                return None
            le.append(cl)
        gts = []
        for group in self.gt:
            red = []
            violated = False
            for c in group:
                if c & hs:
                    continue
                cl = c & lm
                if cl == 0:
                    violated = True
                    break
                red.append(cl)
            if violated:
                continue
            if not red:
                return None
            gts.append(tuple(minimize_masks(red)))
        return tuple(minimize_masks(le)), tuple(sorted(set(gts)))

    def histogram(self, key) -> np.ndarray:
        hist = self.memo.get(key)
        if hist is not None:
            return hist
        lanes, pop = _low_lanes(self.low_bits)
        le, gts = key
        ok = _hit_all(lanes, le) if le else np.ones(lanes.shape, dtype=bool)
        for group in gts:
            ok &= ~_hit_all(lanes, group)
        hist = np.bincount(pop[ok], minlength=self.low_bits + 1)
        self.memo[key] = hist
        return hist

    def run(self, hs: range) -> np.ndarray:
        counts = np.zeros(self.n + 1, dtype=np.int64)
        for h in hs:
            key = self.reduce(h)
            if key is None:
                continue
            hist = self.histogram(key)
            hp = h.bit_count()
            counts[hp : hp + self.low_bits + 1] += hist
        return counts


def count_by_weight(
    n: int,
    le: Sequence[int] = (),
    gt: Sequence[Sequence[int]] = (),
    cap: int | None = None,
    workers: int = 1,
) -> list[int]:
    """Count satisfying assignments of ``n`` variables by number of set bits.

    Args:
        n: number of variables (bits ``0..n-1``).
        le: clauses that must all be hit.
        gt: clause groups that must each be missed somewhere.
        cap: maximum ``n``; defaults to :func:`lulu.errors.enum_cap`.
        workers: threads sharing the high-bit range; results are identical
            for any value.
    """
    cap = enum_cap() if cap is None else cap
    if n > cap:
        raise CapacityError(
            "enumeration", n, cap, "raise LULU_ENUM_CAP or use a closed/recursive formula"
        )
    if n == 0:
        # the empty assignment hits no clause
        return [1 if not le and all(gt) else 0]
    full = (1 << n) - 1
    for c in list(le) + [c for g in gt for c in g]:
        if c & ~full:
            raise ValueError("clause references a variable outside 0..n-1")
    ch = _Chunker(n, le, gt)
    n_high = 1 << (n - ch.low_bits)
    if workers <= 1 or n_high == 1:
        counts = ch.run(range(n_high))
    else:
        step = -(-n_high // workers)
        parts = [range(s, min(s + step, n_high)) for s in range(0, n_high, step)]
        # each worker gets its own memo; the histograms are pure functions of the key
        chunkers = [_Chunker(n, le, gt) for _ in parts]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda a: a[0].run(a[1]), zip(chunkers, parts)))
        counts = np.sum(results, axis=0)
    return [int(c) for c in counts]
