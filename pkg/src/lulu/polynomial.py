"""Exact univariate polynomials in ``p`` with integer or rational coefficients."""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

Coeff = Union[int, Fraction]


def _normalize(c) -> Coeff:
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        c = Fraction(c)
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"polynomial coefficients must be exact, got {type(c).__name__}")


class Polynomial:
    """Immutable polynomial ``c0 + c1 p + c2 p^2 + ...``.

    Coefficients are Python ints (or Fractions when needed), so arithmetic is
    exact for any degree. Trailing zeros are trimmed; the zero polynomial has
    an empty coefficient tuple.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_normalize(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def p(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def q(cls) -> "Polynomial":
        """The polynomial ``1 - p``."""
        return cls([1, -1])

    @classmethod
    def from_q_coeffs(cls, qcoeffs: Sequence) -> "Polynomial":
        """Build from coefficients in ``q = 1 - p`` and expand into the p-basis."""
        return cls(qcoeffs).compose(cls.q())

    @classmethod
    def monomial_pq(cls, i: int, j: int) -> "Polynomial":
        """``p^i q^j`` expanded; ``q^j = sum_k C(j,k) (-p)^k``."""
        out = [0] * (i + j + 1)
        for k in range(j + 1):
            out[i + k] = comb(j, k) * (-1) ** k
        return cls(out)

    @classmethod
    def from_weight_counts(cls, counts: Sequence[int], n: int) -> "Polynomial":
        """``sum_j counts[j] p^j q^(n-j)``, the generating polynomial of an
        enumeration over ``n`` independent Bernoulli(p) variables."""
        out = [0] * (n + 1)
        for j, a in enumerate(counts):
            if a == 0:
                continue
            for k in range(n - j + 1):
                out[j + k] += a * comb(n - j, k) * (-1) ** k
        return cls(out)

    # -- basic accessors --------------------------------------------------
    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, k: int) -> Coeff:
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else 0

    def low_order(self) -> int:
        """Index of the first nonzero coefficient (multiplicity of the root at 0)."""
        for k, c in enumerate(self._coeffs):
            if c != 0:
                return k
        raise ValueError("zero polynomial has no lowest-order term")

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        a, b = self._coeffs, other._coeffs
        n = max(len(a), len(b))
        return Polynomial(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self._coeffs)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        a, b = self._coeffs, other._coeffs
        if not a or not b:
            return Polynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self._coeffs == Polynomial([other])._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """Functional composition ``self(inner(p))`` via Horner's scheme."""
        result = Polynomial()
        for c in reversed(self._coeffs):
            result = result * inner + c
        return result

    def reflect(self) -> "Polynomial":
        """``self(1 - p)``."""
        return self.compose(Polynomial.q())

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self._coeffs) if k > 0)

    def antiderivative(self) -> "Polynomial":
        return Polynomial([0] + [Fraction(c, k + 1) for k, c in enumerate(self._coeffs)])

    def integrate01(self) -> Fraction:
        """Exact integral over ``[0, 1]``."""
        return Fraction(sum(Fraction(c, k + 1) for k, c in enumerate(self._coeffs)))

    # -- evaluation -------------------------------------------------------
    def __call__(self, x):
        """Evaluate exactly at an int/Fraction; floats and arrays go through numpy."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self._coeffs):
                acc = acc * x + c
            return _normalize(acc)
        return self.evaluate_float(x)

    def evaluate_float(self, x):
        cs = [float(c) for c in self._coeffs] or [0.0]
        return np.polynomial.polynomial.polyval(x, cs)

    def bernstein(self, n: int | None = None) -> list:
        """Coefficients ``b_k`` with ``self = sum_k b_k C(n,k) p^k q^(n-k)``."""
        n = self.degree if n is None else n
        if n < self.degree:
            raise ValueError("Bernstein degree below polynomial degree")
        n = max(n, 0)
        # p^i = sum_{k>=i} C(k,i)/C(n,i) * B_{n,k}
        out = [Fraction(0)] * (n + 1)
        for i, c in enumerate(self._coeffs):
            if c == 0:
                continue
            denom = comb(n, i)
            for k in range(i, n + 1):
                out[k] += Fraction(c * comb(k, i), denom)
        return [_normalize(b) for b in out]

    # -- display and serialization ----------------------------------------
    def __repr__(self) -> str:
        return f"Polynomial({list(self._coeffs)!r})"

    def __str__(self) -> str:
        return self.pretty()

    def pretty(self, var: str = "p") -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self._coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                if mag == 1:
                    body = mono
                elif isinstance(mag, Fraction):
                    body = f"({mag}){mono}"
                else:
                    body = f"{mag}{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_json_obj(self) -> dict:
        return {"basis": "p", "coeffs": [str(c) for c in self._coeffs]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Polynomial":
        basis = obj.get("basis", "p")
        coeffs = [Fraction(c) for c in obj["coeffs"]]
        if basis == "p":
            return cls(coeffs)
        if basis == "q":
            return cls.from_q_coeffs(coeffs)
        raise ValueError(f"unknown polynomial basis {basis!r}")

    @classmethod
    def from_json(cls, text: str) -> "Polynomial":
        return cls.from_json_obj(json.loads(text))


P = Polynomial.p()
Q = Polynomial.q()
ONE = Polynomial.const(1)
ZERO = Polynomial()
