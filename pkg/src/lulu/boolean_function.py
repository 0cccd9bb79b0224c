"""Positive Boolean functions of stack filters.

Two readings of the same antichain are used throughout:

* value domain: ``S(x)_0 = max_K min_{o in K} x_o`` over the terms ``K`` of
  :attr:`PBF.value_dnf`;
* threshold domain: with ``T`` the set of window offsets whose input is
  ``<= t``, the output is ``<= t`` iff ``T`` meets every term. So the value
  DNF terms are exactly the clauses of the threshold function ``f_le`` in
  CNF, and ``dualize(value_dnf)`` is its DNF (minimal true sets).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import DEFAULT_TERM_CAP, CapacityError, DimensionError, ParameterError
from .filter_algebra import (
    Boundary,
    Cascade,
    StageKind,
    _as_signal,
    add_offsets,
    as_offset,
    bounding_box,
    pad_signal,
)


def _canon_term(term: Iterable) -> frozenset:
    t = frozenset(as_offset(o) for o in term)
    if not t:
        raise ParameterError("index sets must be nonempty")
    return t


@dataclass(frozen=True)
class Antichain:
    """Inclusion-minimal family of nonempty offset sets."""

    terms: frozenset

    def __init__(self, terms: Iterable[Iterable] = (), *, check: bool = True):
        ts = frozenset(_canon_term(t) for t in terms)
        if check:
            for a in ts:
                for b in ts:
                    if a is not b and a < b:
                        raise ParameterError(f"not an antichain: {sorted(a)} < {sorted(b)}")
            if len({len(next(iter(t))) for t in ts}) > 1:
                raise DimensionError("antichain mixes offset dimensions")
        object.__setattr__(self, "terms", ts)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def __contains__(self, term) -> bool:
        return _canon_term(term) in self.terms

    def sorted_terms(self) -> list[tuple]:
        return [tuple(sorted(t)) for t in sorted(self.terms, key=lambda t: sorted(t))]

    @property
    def dim(self) -> int:
        return len(next(iter(next(iter(self.terms))))) if self.terms else 1

    def variables(self) -> frozenset:
        return frozenset().union(*self.terms) if self.terms else frozenset()

    def translate(self, shift) -> "Antichain":
        shift = as_offset(shift, self.dim)
        return Antichain(
            (frozenset(add_offsets(o, shift) for o in t) for t in self.terms), check=False
        )

    def to_json_obj(self) -> list:
        one_d = self.dim == 1
        return [[o[0] if one_d else list(o) for o in t] for t in self.sorted_terms()]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj) -> "Antichain":
        return cls(obj)

    @classmethod
    def from_json(cls, text: str) -> "Antichain":
        return cls(json.loads(text))

    def __str__(self) -> str:
        def fmt(o):
            return str(o[0]) if len(o) == 1 else "(" + ",".join(map(str, o)) + ")"

        return "{" + ", ".join("{" + ",".join(fmt(o) for o in t) + "}" for t in self.sorted_terms()) + "}"


def condense(terms: Iterable[Iterable]) -> Antichain:
    """Keep only the inclusion-minimal sets."""
    ts = sorted({_canon_term(t) for t in terms}, key=len)
    if not ts:
        raise ParameterError("condense needs at least one set")
    kept: list[frozenset] = []
    for t in ts:
        if not any(k <= t for k in kept):
            kept.append(t)
    return Antichain(kept, check=False)


def _to_masks(terms: Iterable[frozenset]):
    variables = sorted(frozenset().union(*terms))
    index = {o: i for i, o in enumerate(variables)}
    masks = []
    for t in terms:
        m = 0
        for o in t:
            m |= 1 << index[o]
        masks.append(m)
    return variables, masks


def _from_mask(m: int, variables) -> frozenset:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(variables[i])
        m >>= 1
        i += 1
    return frozenset(out)


def minimal_transversals(masks: list[int], cap: int = DEFAULT_TERM_CAP) -> list[int]:
    """Minimal hitting sets of a family of bitmasks (Berge's incremental method)."""
    hs = [0]
    for c in sorted(set(masks), key=lambda m: (m.bit_count(), m)):
        hit = []
        cand = []
        bits = [1 << i for i in range(c.bit_length()) if c >> i & 1]
        for h in hs:
            if h & c:
                hit.append(h)
            else:
                cand.extend(h | b for b in bits)
        if not cand:
            continue
        hit.sort(key=lambda m: m.bit_count())
        cand = sorted(set(cand), key=lambda m: (m.bit_count(), m))
        new = []
        for m in cand:
            if any(k & m == k for k in hit) or any(k & m == k for k in new):
                continue
            new.append(m)
        hs = hit + new
        if len(hs) > cap:
            raise CapacityError("minimal transversal computation", len(hs), cap,
                                "the normal form blows up; raise the term cap")
    return hs


def dualize(a: Antichain, cap: int = DEFAULT_TERM_CAP) -> Antichain:
    """Switch between DNF and CNF of a positive Boolean function.

    Returns the inclusion-minimal transversals of ``a``; the operation is an
    involution on antichains.
    """
    terms = list(a.terms)
    if not terms:
        raise ParameterError("cannot dualize the empty antichain")
    variables, masks = _to_masks(terms)
    return Antichain((_from_mask(m, variables) for m in minimal_transversals(masks, cap)), check=False)


@dataclass(frozen=True)
class PBF:
    """Positive Boolean function of a stack filter with output index 0."""

    value_dnf: Antichain
    window: tuple
    dim: int

    def __init__(self, value_dnf, window: Iterable | None = None):
        if not isinstance(value_dnf, Antichain):
            value_dnf = Antichain(value_dnf)
        if not value_dnf.terms:
            raise ParameterError("a stack filter needs at least one term")
        used = value_dnf.variables()
        win = used if window is None else frozenset(as_offset(o) for o in window)
        if win != used:
            raise ParameterError("window must equal the union of the DNF terms")
        object.__setattr__(self, "value_dnf", value_dnf)
        object.__setattr__(self, "window", tuple(sorted(win)))
        object.__setattr__(self, "dim", value_dnf.dim)

    @property
    def w(self) -> int:
        return len(self.window)

    def bit_index(self) -> dict:
        return {o: i for i, o in enumerate(self.window)}

    def clause_masks(self) -> list[int]:
        """Value terms as bitmasks over :attr:`window` (clauses of ``f_le``)."""
        idx = self.bit_index()
        out = []
        for t in self.value_dnf.terms:
            m = 0
            for o in t:
                m |= 1 << idx[o]
            out.append(m)
        return out

    def threshold_dnf(self) -> Antichain:
        """Minimal sets ``T`` with ``f_le(T)`` true."""
        return dualize(self.value_dnf)

    def translate(self, shift) -> "PBF":
        return PBF(self.value_dnf.translate(shift))

    def evaluate(self, T: Iterable) -> bool:
        return evaluate(self, T)

    def dual(self) -> "PBF":
        """PBF of ``x -> -S(-x)``."""
        return PBF(self.threshold_dnf())

    def apply(self, x, boundary="valid") -> np.ndarray:
        """Value-domain evaluation ``max_K min_{o in K} x[i + o]``."""
        b = Boundary.coerce(boundary)
        arr = _as_signal(x, self.dim)
        lo, hi = bounding_box(self.window)
        if b is not Boundary.VALID:
            arr = pad_signal(arr, lo, hi, b)
        shape = arr.shape[-self.dim:]
        out_shape = [s - (h - l) for s, l, h in zip(shape, lo, hi)]
        if any(s <= 0 for s in out_shape):
            raise ParameterError(
                f"signal extent {tuple(shape)} shorter than window extent "
                f"{tuple(h - l + 1 for l, h in zip(lo, hi))}"
            )
        lead = (slice(None),) * (arr.ndim - self.dim)
        views = {
            o: arr[lead + tuple(slice(ok - lk, ok - lk + n) for ok, lk, n in zip(o, lo, out_shape))]
            for o in self.window
        }
        out = None
        for t in self.value_dnf.sorted_terms():
            m = views[t[0]].copy()
            for o in t[1:]:
                np.minimum(m, views[o], out=m)
            out = m if out is None else np.maximum(out, m, out=out)
        return out

    def to_json(self) -> str:
        return self.value_dnf.to_json()

    def __str__(self) -> str:
        return str(self.value_dnf)


def evaluate(f: PBF, T: Iterable) -> bool:
    """``f_le(T)``: is the output ``<= t`` when exactly the inputs in ``T`` are?"""
    ts = frozenset(as_offset(o, f.dim) for o in T)
    if not ts <= frozenset(f.window):
        raise ParameterError(f"offsets {sorted(ts - frozenset(f.window))} lie outside the window")
    return all(k & ts for k in f.value_dnf.terms)


def _blow_up(terms: Iterable[frozenset], element) -> list[frozenset]:
    return [frozenset(add_offsets(o, e) for o in t for e in element) for t in terms]


def pbf_of_cascade(c: Cascade, cap: int = DEFAULT_TERM_CAP) -> PBF:
    """Value-domain DNF of a cascade by alternating blow-ups and form switches.

    The expression is kept as an antichain in DNF (max of mins) while an
    erosion is substituted and in CNF (min of maxes) while a dilation is
    substituted, dualizing whenever the next stage needs the other form.
    """
    if not c.stages:
        return PBF([[(0,) * c.dim]])
    expr = Antichain([[(0,) * c.dim]], check=False)
    form = None
    for st in c.stages:
        need = "cnf" if st.kind is StageKind.DILATION else "dnf"
        if form is not None and form != need:
            expr = dualize(expr, cap)
        form = need
        expr = condense(_blow_up(expr.terms, st.element))
        if len(expr) > cap:
            raise CapacityError("normal form", len(expr), cap)
    if form == "cnf":
        expr = dualize(expr, cap)
    return PBF(expr)


def pbf_threshold(window: Iterable, k: int) -> PBF:
    """Stack filter selecting the ``k``-th smallest value on ``window``."""
    win = sorted(as_offset(o) for o in window)
    w = len(win)
    if not 1 <= k <= w:
        raise ParameterError(f"rank k must satisfy 1 <= k <= {w}, got {k}")
    return PBF(Antichain((frozenset(s) for s in combinations(win, w - k + 1)), check=False))


def pbf_of_rank(w: int, k: int) -> PBF:
    """Rank filter on the centered window ``{-(w-1)/2, ..., (w-1)/2}``."""
    if w < 1 or w % 2 == 0:
        raise ParameterError(f"rank filter window must be odd and positive, got {w}")
    n = (w - 1) // 2
    return pbf_threshold(range(-n, n + 1), k)


def random_pbf(rng, max_vars: int = 8, max_terms: int = 6, dim: int = 1) -> PBF:
    """Random positive function (for corpora and property tests)."""
    nvars = int(rng.integers(1, max_vars + 1))
    window = [(i,) if dim == 1 else (i, 0) for i in range(nvars)]
    nterms = int(rng.integers(1, max_terms + 1))
    terms = []
    for _ in range(nterms):
        size = int(rng.integers(1, nvars + 1))
        picks = rng.choice(nvars, size=size, replace=False)
        terms.append(frozenset(window[i] for i in picks))
    return PBF(condense(terms))
