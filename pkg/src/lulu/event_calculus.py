"""Exact probabilities of joint threshold events on derived sequences.

A :class:`Pattern` such as ``(0, ~1, ~2, 3)_B`` stands for
``P(B_0 <= t, B_1 > t, B_2 > t, B_3 <= t)`` where ``B`` is a cascade applied
to an i.i.d. sequence ``X`` with ``P(X_i <= t) = p``. Probabilities are
computed by exhaustive enumeration over the X-offsets the constrained values
depend on, so every identity checked here is an exact polynomial equality.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .boolean_function import PBF, pbf_of_cascade
from .enumeration import count_by_weight
from .errors import ParameterError
from .filter_algebra import Cascade, add_offsets, as_offset, compose, dilation, erosion
from .polynomial import Polynomial


class Rel(enum.Enum):
    LE = "<="
    GT = ">"


@dataclass(frozen=True)
class DerivedPipeline:
    cascade: Cascade = field(default_factory=Cascade.identity)
    label: str = "X"

    def pbf(self) -> PBF:
        return pbf_of_cascade(self.cascade)

    def then(self, outer: Cascade, label: str) -> "DerivedPipeline":
        """The pipeline ``outer . self``."""
        return DerivedPipeline(compose(outer, self.cascade), label)


X = DerivedPipeline()


@dataclass(frozen=True)
class Pattern:
    constraints: tuple
    pipeline: DerivedPipeline = X

    def __init__(self, constraints, pipeline: DerivedPipeline | Cascade = X):
        if isinstance(pipeline, Cascade):
            pipeline = DerivedPipeline(pipeline, "S")
        items = constraints.items() if isinstance(constraints, Mapping) else constraints
        dim = pipeline.cascade.dim
        cs: dict = {}
        for o, rel in items:
            o = as_offset(o, dim)
            rel = rel if isinstance(rel, Rel) else Rel.GT if rel in (">", "gt", True) else Rel.LE
            if o in cs and cs[o] is not rel:
                raise ParameterError(f"offset {o} constrained both ways")
            cs[o] = rel
        if not cs:
            raise ParameterError("a pattern needs at least one constraint")
        object.__setattr__(self, "constraints", tuple(sorted(cs.items())))
        object.__setattr__(self, "pipeline", pipeline)

    @classmethod
    def of(cls, pipeline=X, le: Iterable = (), gt: Iterable = ()) -> "Pattern":
        """Pattern from lists of ``<= t`` and ``> t`` offsets (duplicates merge)."""
        items = [(o, Rel.LE) for o in le] + [(o, Rel.GT) for o in gt]
        return cls(items, pipeline)

    def shifted(self, s) -> "Pattern":
        s = as_offset(s, self.pipeline.cascade.dim)
        return Pattern([(add_offsets(o, s), r) for o, r in self.constraints], self.pipeline)

    def with_constraint(self, o, rel: Rel) -> "Pattern":
        return Pattern(list(self.constraints) + [(o, rel)], self.pipeline)

    def without(self, o) -> "Pattern":
        o = as_offset(o, self.pipeline.cascade.dim)
        return Pattern([(k, r) for k, r in self.constraints if k != o], self.pipeline)

    def __str__(self) -> str:
        def fmt(o):
            return str(o[0]) if len(o) == 1 else "[" + ",".join(map(str, o)) + "]"

        body = ",".join(("~" if r is Rel.GT else "") + fmt(o) for o, r in self.constraints)
        return f"({body})_{self.pipeline.label}"


def x_support(pat: Pattern) -> frozenset:
    """X-offsets on which the constrained derived values depend."""
    win = pat.pipeline.pbf().window
    return frozenset(add_offsets(o, w) for o, _ in pat.constraints for w in win)


def pattern_prob(pat: Pattern, cap: int | None = None, workers: int = 1) -> Polynomial:
    """Probability of the pattern as an exact polynomial in ``p``."""
    f = pat.pipeline.pbf()
    xs = sorted(x_support(pat))
    idx = {o: i for i, o in enumerate(xs)}
    le: list[int] = []
    gt: list[list[int]] = []
    for o, rel in pat.constraints:
        clauses = []
        for term in f.value_dnf.terms:
            m = 0
            for w in term:
                m |= 1 << idx[add_offsets(o, w)]
            clauses.append(m)
        if rel is Rel.LE:
            le.extend(clauses)
        else:
            gt.append(clauses)
    counts = count_by_weight(len(xs), le, gt, cap=cap, workers=workers)
    return Polynomial.from_weight_counts(counts, len(xs))


_PATTERN_RE = re.compile(r"^\s*\((?P<body>.*)\)\s*_\s*(?P<label>[A-Za-z]\w*)\s*$")


def _split_top(body: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in body:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def parse_pattern(text: str, pipelines: Mapping[str, Cascade] | None = None) -> Pattern:
    """Parse ``"(0,~1,~2,3)_B"``; ``~`` marks a ``> t`` constraint.

    2D offsets are written ``[i,j]``. The label ``X`` is the input itself;
    other labels are looked up in ``pipelines``.
    """
    m = _PATTERN_RE.match(text)
    if not m:
        raise ParameterError(f"malformed pattern {text!r}")
    label = m.group("label")
    pipelines = dict(pipelines or {})
    if label in pipelines:
        pipe = DerivedPipeline(pipelines[label], label)
    elif label == "X":
        pipe = X
    else:
        raise ParameterError(f"pattern refers to undefined sequence {label!r}")
    items = []
    for tok in _split_top(m.group("body")):
        gt = tok.startswith("~")
        tok = tok.lstrip("~").strip()
        try:
            if tok.startswith("[") or tok.startswith("("):
                off = tuple(int(v) for v in tok.strip("[]()").split(","))
            else:
                off = (int(tok),)
        except ValueError:
            raise ParameterError(f"malformed offset {tok!r} in pattern {text!r}") from None
        items.append((off, Rel.GT if gt else Rel.LE))
    return Pattern(items, pipe)


# -- identities --------------------------------------------------------------------


class IdentityNotApplicable(ParameterError):
    """The requested parameters fall outside the identity's stated range."""


def _inclusion_exclusion(n: int, pipeline: DerivedPipeline = X, offsets=None):
    offs = list(range(n)) if offsets is None else list(offsets)
    if len(offs) != n or n < 1:
        raise ParameterError("L7 needs n >= 1 distinct offsets")
    lhs = pattern_prob(Pattern.of(pipeline, le=offs))
    rhs = Polynomial.const(1)
    for size in range(1, n + 1):
        sign = (-1) ** size
        for sub in combinations(offs, size):
            rhs = rhs + sign * pattern_prob(Pattern.of(pipeline, gt=sub))
    return lhs, rhs


def _all_high_run(n: int, pipeline: DerivedPipeline = X):
    if n < 1:
        raise ParameterError("L8 needs n >= 1")
    lhs = pattern_prob(Pattern.of(pipeline, gt=range(n + 1)))
    rhs = 1 - (n + 1) * pattern_prob(Pattern.of(pipeline, le=[0]))
    for i in range(n):
        pat = Pattern.of(pipeline, le=[0, i + 1], gt=range(1, i + 1))
        rhs = rhs + (n - i) * pattern_prob(pat)
    return lhs, rhs


def _dilated_gap(n: int, r: int, base: DerivedPipeline = X):
    if n < 2 or r < 0:
        raise ParameterError("L9 needs n >= 2 and r >= 0")
    B = base.then(Cascade([dilation(r)]), "B")
    lhs = pattern_prob(Pattern.of(B, le=[0, n], gt=range(1, n)))
    if n <= r + 1:
        return lhs, Polynomial()
    if n < 2 * r + 4:
        rhs = pattern_prob(
            Pattern.of(base, le=list(range(r + 1)) + list(range(n, n + r + 1)), gt=[r + 1, n - 1])
        )
        return lhs, rhs
    raise IdentityNotApplicable(f"L9 states nothing for n={n} >= 2r+4={2 * r + 4}")


def _eroded_gap(n: int, r: int, base: DerivedPipeline = X):
    if n < 2 or r < 0:
        raise ParameterError("L10 needs n >= 2 and r >= 0")
    B = base.then(Cascade([erosion(r)]), "B")
    lhs = pattern_prob(Pattern.of(B, le=range(1, n), gt=[0, n]))
    if n <= r + 1:
        return lhs, Polynomial()
    if n < 2 * r + 4:
        rhs = pattern_prob(
            Pattern.of(base, le=[r + 1, n - 1], gt=list(range(r + 1)) + list(range(n, n + r + 1)))
        )
        return lhs, rhs
    raise IdentityNotApplicable(f"L10 states nothing for n={n} >= 2r+4={2 * r + 4}")


_IDENTITIES = {"L7": _inclusion_exclusion, "L8": _all_high_run, "L9": _dilated_gap, "L10": _eroded_gap}


def identity_sides(name: str, **params) -> tuple[Polynomial, Polynomial]:
    """Both sides of an expansion-calculus identity as exact polynomials.

    ``L7``: ``n``, optional ``pipeline``/``offsets``; ``L8``: ``n``, optional
    ``pipeline``; ``L9``/``L10``: ``n``, ``r``, optional ``base`` sequence A.
    """
    try:
        fn = _IDENTITIES[name.upper()]
    except KeyError:
        raise ParameterError(f"unknown identity {name!r}; choose from {sorted(_IDENTITIES)}") from None
    return fn(**params)


def check_identity(name: str, **params) -> bool:
    lhs, rhs = identity_sides(name, **params)
    return lhs == rhs


def identity_cases(max_l7: int = 5, max_l8: int = 6, max_r: int = 2, bases=None):
    """Parameter sets covering the stated ranges of all four identities."""
    if bases is None:
        bases = [X, DerivedPipeline(Cascade([dilation(1)]), "A")]
    cases = []
    for base in bases:
        for n in range(1, max_l7 + 1):
            cases.append(("L7", {"n": n, "pipeline": base}))
        for n in range(1, max_l8 + 1):
            cases.append(("L8", {"n": n, "pipeline": base}))
        for r in range(0, max_r + 1):
            for n in range(2, 2 * r + 4):
                cases.append(("L9", {"n": n, "r": r, "base": base}))
                cases.append(("L10", {"n": n, "r": r, "base": base}))
    return cases
