"""Robustness orders, rank selection probabilities and dominance checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .boolean_function import PBF
from .distribution import a_vector, phi_rank
from .errors import ParameterError
from .polynomial import Polynomial


@dataclass(frozen=True)
class RobustnessOrders:
    lower: int
    upper: int


def _check_transfer(phi: Polynomial) -> None:
    if phi(0) != 0 or phi(1) != 1:
        raise ParameterError(
            f"not a valid transfer polynomial: phi(0)={phi(0)}, phi(1)={phi(1)}"
        )


def robustness_orders(phi: Polynomial) -> RobustnessOrders:
    """Root multiplicities of ``phi`` at 0 (lower) and of ``phi - 1`` at 1 (upper).

    Both are read off exact coefficients: the upper order is the lowest
    nonzero power of ``1 - phi(1 - p)``.
    """
    _check_transfer(phi)
    lower = phi.low_order()
    upper = (1 - phi.reflect()).low_order()
    return RobustnessOrders(lower, upper)


@dataclass(frozen=True)
class RspVector:
    """``rsp[j-1]`` = probability the filter outputs the j-th smallest window value."""

    rsp: tuple

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.rsp)
        if any(v < 0 for v in vals):
            raise ParameterError("rank selection probabilities must be nonnegative")
        if sum(vals) != 1:
            raise ParameterError(f"rank selection probabilities sum to {sum(vals)}, not 1")
        object.__setattr__(self, "rsp", vals)

    @property
    def w(self) -> int:
        return len(self.rsp)

    def __getitem__(self, j: int) -> Fraction:
        """1-based access, ``rsp[1] .. rsp[w]``."""
        if not 1 <= j <= self.w:
            raise IndexError(j)
        return self.rsp[j - 1]

    def __iter__(self):
        return iter(self.rsp)

    def __eq__(self, other) -> bool:
        if isinstance(other, RspVector):
            return self.rsp == other.rsp
        return list(self.rsp) == [Fraction(v) for v in other]

    def __hash__(self) -> int:
        return hash(self.rsp)

    def as_strings(self) -> list[str]:
        return [str(v) for v in self.rsp]


def rsp(f: PBF, cap: int | None = None) -> RspVector:
    """Rank selection probabilities from the a-vector.

    The j smallest of ``w`` i.i.d. continuous inputs form a uniformly random
    j-subset, so ``P(output <= j-th smallest) = a_j / C(w, j)``; successive
    differences give the selection probabilities.
    """
    av = a_vector(f, cap=cap)
    cdf = av.normalized()
    return RspVector(tuple(cdf[j] - cdf[j - 1] for j in range(1, av.w + 1)))


def phi_from_rsp(r: RspVector | Sequence, w: int | None = None) -> Polynomial:
    """``sum_j rsp[j] * phi_rank(w, j)``."""
    if not isinstance(r, RspVector):
        r = RspVector(tuple(r))
    w = r.w if w is None else w
    if w != r.w:
        raise ParameterError(f"rsp has {r.w} entries but window size is {w}")
    out = Polynomial()
    for j, v in enumerate(r.rsp, start=1):
        if v:
            out = out + v * phi_rank(w, j)
    return out


DEFAULT_GRID = tuple(Fraction(i, 100) for i in range(1, 100))


def dominance_check(phi_a: Polynomial, phi_b: Polynomial,
                    grid: Iterable = DEFAULT_GRID) -> bool:
    """``phi_b(p) <= phi_a(p)`` at every grid point, in exact arithmetic.

    For pointwise-ordered filters ``A <= B`` this is the expected relation.
    """
    pts = [Fraction(g) for g in grid]
    if any(not 0 < g < 1 for g in pts):
        raise ParameterError("grid points must lie in the open interval (0, 1)")
    return all(phi_b(g) <= phi_a(g) for g in pts)


def robustness_table(polys: dict) -> list[dict]:
    """Rows ``{filter, window, lower, upper, rsp}`` for a mapping of name -> (phi, pbf|None)."""
    rows = []
    for name, (phi, f) in polys.items():
        ro = robustness_orders(phi)
        row = {"filter": name, "window": f.w if f is not None else None,
               "lower": ro.lower, "upper": ro.upper}
        if f is not None:
            row["rsp"] = rsp(f).as_strings()
        rows.append(row)
    return rows
