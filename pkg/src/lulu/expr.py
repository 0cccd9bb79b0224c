"""Filter expressions: ``L3 U4 L2 U1 U5``, ``R2,3``, ``max{0,1} min{-2,-1,0}``.

Grammar (whitespace between tokens is ignored)::

    expr    = atom { atom } ;
    atom    = ("L" | "U" | "M" | "C" | "F") int
            | "R" int "," int
            | ("max" | "min") ( "{" offset { "," offset } "}" | int ) ;
    offset  = int | "[" int "," int "]" ;
    int     = [ "-" ] digit { digit } ;

Juxtaposition is composition and the rightmost atom is applied first. ``Mn``
and ``Rn,k`` are rank filters; they denote stack filters that are not
cascades and must stand alone. ``max n`` abbreviates ``max{0,...,n}`` and
``min n`` abbreviates ``min{-n,...,0}``, matching how cascades print.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError
from .filter_algebra import Cascade, Stage, StageKind, StructuralElement, build_basic, compose


class ParseError(ParameterError):
    def __init__(self, msg: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{msg} at position {pos}: {text!r}")


@dataclass(frozen=True)
class Atom:
    kind: str  # L U M C F R max min
    n: int | None = None
    k: int | None = None
    offsets: tuple | None = None

    def __str__(self) -> str:
        if self.kind == "R":
            return f"R{self.n},{self.k}"
        if self.kind in ("max", "min"):
            body = ",".join(str(o[0]) if len(o) == 1 else f"[{o[0]},{o[1]}]" for o in self.offsets)
            return f"{self.kind}{{{body}}}"
        return f"{self.kind}{self.n}"

    @property
    def is_rank(self) -> bool:
        return self.kind in ("M", "R")

    @property
    def dim(self) -> int:
        return len(self.offsets[0]) if self.offsets else 1

    def cascade(self) -> Cascade:
        if self.kind in ("max", "min"):
            kind = StageKind.DILATION if self.kind == "max" else StageKind.EROSION
            return Cascade([Stage(kind, StructuralElement(self.offsets))])
        return build_basic(self.kind, self.n)


@dataclass(frozen=True)
class FilterExpr:
    atoms: tuple

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.atoms)

    @property
    def dim(self) -> int:
        return self.atoms[0].dim

    def reversed(self) -> "FilterExpr":
        return FilterExpr(tuple(reversed(self.atoms)))

    def to_filter(self):
        """A :class:`Cascade`, or a PBF for a lone rank atom."""
        ranks = [a for a in self.atoms if a.is_rank]
        if ranks:
            if len(self.atoms) != 1:
                raise ParameterError("rank filters (M, R) cannot be composed with other atoms")
            a = ranks[0]
            return build_basic("Rank", a.n, a.n + 1 if a.kind == "M" else a.k)
        out = Cascade.identity(self.dim)
        for a in reversed(self.atoms):
            out = compose(a.cascade(), out)
        return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise ParseError(msg, self.text, self.pos)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.ws()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        if not self.peek(s):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def integer(self, signed: bool = True) -> int:
        self.ws()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start : self.pos]
        if digits in ("", "-"):
            self.pos = start
            self.error("expected an integer")
        return int(digits)

    def positive(self) -> int:
        start = self.pos
        v = self.integer(signed=False)
        if v < 1:
            self.pos = start
            self.error("parameter must be positive")
        return v

    def offset(self) -> tuple:
        if self.peek("["):
            self.expect("[")
            i = self.integer()
            self.expect(",")
            j = self.integer()
            self.expect("]")
            return (i, j)
        return (self.integer(),)

    def atom(self) -> Atom:
        self.ws()
        for kw in ("max", "min"):
            if self.text.startswith(kw, self.pos):
                self.pos += 3
                if not self.peek("{"):
                    start = self.pos
                    n = self.integer(signed=False)
                    if n < 1:
                        self.pos = start
                        self.error("element size must be positive")
                    span = range(0, n + 1) if kw == "max" else range(-n, 1)
                    return Atom(kw, offsets=tuple((i,) for i in span))
                self.expect("{")
                offs = [self.offset()]
                while self.peek(","):
                    self.expect(",")
                    offs.append(self.offset())
                self.expect("}")
                if len({len(o) for o in offs}) != 1:
                    self.error("structural element mixes 1D and 2D offsets")
                return Atom(kw, offsets=tuple(sorted(set(offs))))
        ch = self.text[self.pos] if self.pos < len(self.text) else ""
        if ch in "LUMCF":
            self.pos += 1
            return Atom(ch, n=self.positive())
        if ch == "R":
            self.pos += 1
            n = self.positive()
            self.expect(",")
            k = self.positive()
            if k > 2 * n + 1:
                self.error(f"rank {k} exceeds window size {2 * n + 1}")
            return Atom("R", n=n, k=k)
        self.error("unknown atom" if ch else "unexpected end of expression")

    def parse(self) -> FilterExpr:
        atoms = [self.atom()]
        self.ws()
        while self.pos < len(self.text):
            atoms.append(self.atom())
            self.ws()
        dims = {a.dim for a in atoms}
        if len(dims) > 1:
            self.pos = 0
            self.error("expression mixes 1D and 2D atoms")
        return FilterExpr(tuple(atoms))


def parse(text: str) -> FilterExpr:
    return _Parser(text).parse()


def describe_closed(expr: FilterExpr):
    """``(name, n, k)`` when a closed formula applies, else ``None``."""
    a = expr.atoms
    if len(a) == 1 and a[0].kind in ("L", "U"):
        return a[0].kind, a[0].n, None
    if len(a) == 1 and a[0].kind == "M":
        return "Median", a[0].n, None
    if len(a) == 1 and a[0].kind == "R":
        return "Rank", a[0].n, a[0].k
    if len(a) == 2 and a[0].n == a[1].n and (a[0].kind, a[1].kind) in (("L", "U"), ("U", "L")):
        return a[0].kind + a[1].kind, a[0].n, None
    return None

