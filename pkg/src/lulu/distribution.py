"""Output distribution polynomials ``phi_S`` with ``F_SX = phi_S o F_X``.

Routes to the same polynomial:

* :func:`phi_enum` counts the true sets of the threshold function by size;
* :func:`phi_incl_excl` runs inclusion-exclusion over the value DNF terms;
* :func:`phi_closed` evaluates the closed forms for rank filters, ``L_n``,
  ``U_n``, ``L_nU_n`` and ``U_nL_n``;
* :func:`phi_C_recursive` builds ``phi_{C_n}`` from ``phi_{C_{n-1}}`` and
  the two correction events :func:`g_term`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .boolean_function import PBF, pbf_of_cascade
from .enumeration import count_by_weight
from .errors import DEFAULT_INCL_EXCL_CAP, CapacityError, ParameterError
from .event_calculus import DerivedPipeline, Pattern, pattern_prob
from .filter_algebra import Cascade, build_basic, compose, dilation, erosion
from .polynomial import Polynomial

P = Polynomial.p()
Q = Polynomial.q()


@dataclass(frozen=True)
class AVector:
    """``a[j]`` = number of ``j``-subsets ``T`` of the window with ``f_le(T)``."""

    a: tuple

    @property
    def w(self) -> int:
        return len(self.a) - 1

    def __getitem__(self, j: int) -> int:
        return self.a[j]

    def __iter__(self):
        return iter(self.a)

    def __len__(self) -> int:
        return len(self.a)

    def __eq__(self, other) -> bool:
        if isinstance(other, AVector):
            return self.a == other.a
        return list(self.a) == list(other)

    def __hash__(self) -> int:
        return hash(self.a)

    def normalized(self) -> list[Fraction]:
        """``a[j] / C(w, j)``: probability that the output is below the j-th order statistic."""
        return [Fraction(c, comb(self.w, j)) for j, c in enumerate(self.a)]


def a_vector(f: PBF, cap: int | None = None, workers: int = 1) -> AVector:
    counts = count_by_weight(f.w, le=f.clause_masks(), cap=cap, workers=workers)
    return AVector(tuple(counts))


def phi_enum(f: PBF, cap: int | None = None, workers: int = 1) -> Polynomial:
    """``sum_j a_j p^j q^(w-j)`` from the enumerated a-vector."""
    return Polynomial.from_weight_counts(a_vector(f, cap, workers).a, f.w)


def phi_incl_excl(f: PBF, cap: int = DEFAULT_INCL_EXCL_CAP) -> Polynomial:
    """Inclusion-exclusion over value terms: ``sum_T (-1)^|T| q^{|union T|}``.

    The output is ``<= t`` iff every term holds an input ``<= t``; the sum runs
    over all subfamilies of terms forced to be entirely ``> t``.
    """
    masks = f.clause_masks()
    m = len(masks)
    if m > cap:
        raise CapacityError("inclusion-exclusion terms", m, cap, "use the enumeration method")
    if f.w <= 62:
        unions = np.zeros(1, dtype=np.int64)
        parity = np.zeros(1, dtype=np.int8)
        for t in masks:
            unions = np.concatenate([unions, unions | np.int64(t)])
            parity = np.concatenate([parity, parity ^ 1])
        sizes = np.bitwise_count(unions).astype(np.int64)
        plus = np.bincount(sizes[parity == 0], minlength=f.w + 1)
        minus = np.bincount(sizes[parity == 1], minlength=f.w + 1)
        qcoeffs = [int(a) - int(b) for a, b in zip(plus, minus)]
    else:
        qcoeffs = [0] * (f.w + 1)
        stack = [(0, 0, 1)]
        while stack:
            i, u, sign = stack.pop()
            if i == m:
                qcoeffs[u.bit_count()] += sign
                continue
            stack.append((i + 1, u, sign))
            stack.append((i + 1, u | masks[i], -sign))
    return Polynomial.from_q_coeffs(qcoeffs)


def phi_rank(w: int, k: int) -> Polynomial:
    """``sum_{j>=k} C(w,j) p^j q^(w-j)``: the k-th smallest of ``w`` i.i.d. values."""
    if not 1 <= k <= w:
        raise ParameterError(f"rank k must satisfy 1 <= k <= {w}, got {k}")
    return Polynomial.from_weight_counts([0] * k + [comb(w, j) for j in range(k, w + 1)], w)


def _phi_lu(n: int) -> Polynomial:
    half = Fraction((n - 1) * (n + 2), 2)
    return (
        P ** (n + 1)
        + n * P ** (n + 1) * Q
        + P ** (2 * n + 2) * Q
        + half * P ** (2 * n + 2) * Q**2
    )


def _phi_ul(n: int) -> Polynomial:
    half = Fraction((n - 1) * (n + 2), 2)
    return (
        1
        - Q ** (n + 1)
        - n * P * Q ** (n + 1)
        - P * Q ** (2 * n + 2)
        - half * P**2 * Q ** (2 * n + 2)
    )


def phi_closed(name: str, n: int, k: int | None = None) -> Polynomial:
    """Closed-form transfer polynomial of a named operator."""
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    key = name.upper()
    if key in ("RANK", "R"):
        if k is None:
            raise ParameterError("rank filters need k")
        return phi_rank(2 * n + 1, k)
    if key in ("MEDIAN", "M"):
        return phi_rank(2 * n + 1, n + 1)
    if key == "L":
        return 1 - (n + 1) * Q ** (n + 1) + n * Q ** (n + 2)
    if key == "U":
        return (n + 1) * P ** (n + 1) - n * P ** (n + 2)
    if key == "LU":
        return _phi_lu(n)
    if key == "UL":
        return _phi_ul(n)
    raise ParameterError(f"no closed form for {name!r}")


# -- the C_n recursion -------------------------------------------------------------


def g_pipelines(n: int) -> tuple[DerivedPipeline, DerivedPipeline]:
    """``A = max_{n-1} C_{n-2} X`` and ``B = min_{2n-2} A``."""
    if n < 2:
        raise ParameterError("G-terms are defined for n >= 2 (C_1 is the recursion base)")
    c_prev = build_basic("C", n - 2) if n > 2 else Cascade.identity()
    A = DerivedPipeline(compose(Cascade([dilation(n - 1)]), c_prev), "A")
    B = A.then(Cascade([erosion(2 * n - 2)]), "B")
    return A, B


def g_patterns(n: int) -> tuple[Pattern, Pattern]:
    """The (even, odd) correction events of the ``C_n`` recursion."""
    A, B = g_pipelines(n)
    even = Pattern.of(B, le=[i for i in range(4 * n + 1) if i != 2 * n], gt=[2 * n])
    odd = Pattern.of(
        A, le=[2 * n - 1], gt=[i for i in range(4 * n - 1) if i != 2 * n - 1]
    )
    return even, odd


def g_term(n: int, which: str, cap: int | None = None, workers: int = 1) -> Polynomial:
    """``G_{2n}`` (``which="even"``) or ``G_{2n-1}`` (``"odd"``) by enumeration."""
    even, odd = g_patterns(n)
    key = which.lower().replace("g_", "")
    if key == "even":
        return pattern_prob(even, cap=cap, workers=workers)
    if key == "odd":
        return pattern_prob(odd, cap=cap, workers=workers)
    raise ParameterError(f"which must be 'even' or 'odd', got {which!r}")


def g_terms_c2_closed() -> tuple[Polynomial, Polynomial]:
    """Closed forms ``G_4 = p^4 q^2 (p + p^2 q)^2`` and ``G_3 = p^2 q^2 (1 - p^2)^2``."""
    g4 = P**4 * Q**2 * (P + P**2 * Q) ** 2
    g3 = P**2 * Q**2 * (1 - P**2) ** 2
    return g4, g3


def phi_C_recursive(n: int, gsource: str = "enumerated", cap: int | None = None,
                    workers: int = 1) -> Polynomial:
    """``phi_{C_n} = phi_{C_{n-1}} + n (G_{2n} - G_{2n-1})`` from ``phi_{C_1} = phi_{L_1U_1}``.

    ``gsource="closed"`` uses the closed G-terms, available for ``n = 2`` only.
    """
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    src = gsource.lower()
    if src == "closed":
        if n > 2:
            raise ParameterError("closed G-terms are only known for n = 2")
        closed = True
    elif src in ("enumerated", "enum"):
        closed = False
    else:
        raise ParameterError(f"unknown G-term source {gsource!r}")
    phi = phi_closed("LU", 1)
    for m in range(2, n + 1):
        if closed:
            g_even, g_odd = g_terms_c2_closed()
        else:
            g_even = g_term(m, "even", cap=cap, workers=workers)
            g_odd = g_term(m, "odd", cap=cap, workers=workers)
        phi = phi + m * (g_even - g_odd)
    return phi


def phi_compose_naive(outer: Polynomial, inner: Polynomial) -> Polynomial:
    """``outer o inner``; not the transfer function of a composed filter in general."""
    return outer.compose(inner)


def phi_of(filt, method: str = "enum", cap: int | None = None, workers: int = 1) -> Polynomial:
    """Transfer polynomial of a cascade or PBF by ``enum`` or ``ie``."""
    f = pbf_of_cascade(filt) if isinstance(filt, Cascade) else filt
    if method == "enum":
        return phi_enum(f, cap=cap, workers=workers)
    if method == "ie":
        return phi_incl_excl(f) if cap is None else phi_incl_excl(f, cap)
    raise ParameterError(f"unknown method {method!r}")


def reference_data() -> dict:
    """Published reference values shipped with the package.

    Keys: ``phi_C2`` and ``phi_C5`` (:class:`Polynomial`), ``C_robustness``
    (rows ``{n, lower, upper}`` for n = 1..6) and ``C5_dnf_terms``.
    """
    import json
    from importlib.resources import files

    raw = json.loads(files("lulu").joinpath("data/reference.json").read_text(encoding="utf-8"))
    rob = raw["C_robustness"]
    return {
        "phi_C2": Polynomial.from_json_obj(raw["phi_C2"]),
        "phi_C5": Polynomial.from_json_obj(raw["phi_C5"]),
        "C_robustness": [
            {"n": n, "lower": lo, "upper": up}
            for n, lo, up in zip(rob["n"], rob["lower"], rob["upper"])
        ],
        "C5_dnf_terms": raw["C5_dnf_terms"],
    }
