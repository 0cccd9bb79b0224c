"""Erosion/dilation cascades on 1D sequences and 2D arrays.

A :class:`Cascade` lists its stages in composition order: ``stages[0]`` is
the outermost operator and ``stages[-1]`` touches the input first, so
``[dilation(1), erosion(2), dilation(3)]`` is ``max1 . min2 . max3``.

Each stage computes ``out[i] = op(x[i + e] for e in element)``, with ``op``
being ``min`` for an erosion and ``max`` for a dilation. With this reading the
dependence set of a cascade is the plain Minkowski sum of its elements
(:func:`reach`). Adjacent stages of one kind fuse into a single stage whose
element is the Minkowski sum of the two.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionError, ParameterError

Offset = tuple  # tuple[int, ...], length = dimension


def as_offset(o, dim: int | None = None) -> Offset:
    """Normalize an int or int sequence into an offset tuple."""
    if isinstance(o, (int, np.integer)):
        off = (int(o),)
    else:
        off = tuple(int(v) for v in o)
    if not off:
        raise ParameterError("offsets need at least one coordinate")
    if dim is not None and len(off) != dim:
        raise DimensionError(f"offset {off} is not {dim}-dimensional")
    return off


def add_offsets(a: Offset, b: Offset) -> Offset:
    return tuple(x + y for x, y in zip(a, b))


def minkowski_sum(a: Iterable[Offset], b: Iterable[Offset]) -> frozenset:
    b = list(b)
    return frozenset(add_offsets(x, y) for x in a for y in b)


def bounding_box(offsets: Iterable[Offset]) -> tuple[Offset, Offset]:
    offs = list(offsets)
    dim = len(offs[0])
    lo = tuple(min(o[k] for o in offs) for k in range(dim))
    hi = tuple(max(o[k] for o in offs) for k in range(dim))
    return lo, hi


class StageKind(enum.Enum):
    EROSION = "min"
    DILATION = "max"

    @property
    def dual(self) -> "StageKind":
        return StageKind.DILATION if self is StageKind.EROSION else StageKind.EROSION


@dataclass(frozen=True)
class StructuralElement:
    offsets: tuple

    def __init__(self, offsets: Iterable):
        offs = sorted({as_offset(o) for o in offsets})
        if not offs:
            raise ParameterError("structural element must be nonempty")
        dim = len(offs[0])
        if any(len(o) != dim for o in offs):
            raise DimensionError("structural element mixes dimensions")
        object.__setattr__(self, "offsets", tuple(offs))

    @property
    def dim(self) -> int:
        return len(self.offsets[0])

    def __len__(self) -> int:
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)

    def __add__(self, other: "StructuralElement") -> "StructuralElement":
        if other.dim != self.dim:
            raise DimensionError("cannot fuse elements of different dimension")
        return StructuralElement(minkowski_sum(self.offsets, other.offsets))

    def reflected(self) -> "StructuralElement":
        return StructuralElement(tuple(-c for c in o) for o in self.offsets)

    def bounds(self) -> tuple[Offset, Offset]:
        return bounding_box(self.offsets)

    def is_interval(self) -> bool:
        if self.dim != 1:
            return False
        lo, hi = self.offsets[0][0], self.offsets[-1][0]
        return len(self.offsets) == hi - lo + 1


@dataclass(frozen=True)
class Stage:
    kind: StageKind
    element: StructuralElement

    @property
    def dim(self) -> int:
        return self.element.dim

    def dual(self) -> "Stage":
        return Stage(self.kind.dual, self.element)

    def __str__(self) -> str:
        el = self.element
        if el.is_interval():
            lo, hi = el.offsets[0][0], el.offsets[-1][0]
            if self.kind is StageKind.DILATION and lo == 0:
                return f"max{hi}"
            if self.kind is StageKind.EROSION and hi == 0:
                return f"min{-lo}"
        return f"{self.kind.value}{{{', '.join(_fmt_offset(o) for o in el)}}}"


def _fmt_offset(o: Offset) -> str:
    return str(o[0]) if len(o) == 1 else "[" + ",".join(map(str, o)) + "]"


def dilation(elem: Union[int, Iterable]) -> Stage:
    """Dilation stage; an int ``n`` means the element ``{0, ..., n}``."""
    if isinstance(elem, (int, np.integer)):
        if elem < 0:
            raise ParameterError("dilation size must be >= 0")
        elem = range(0, int(elem) + 1)
    return Stage(StageKind.DILATION, StructuralElement(elem))


def erosion(elem: Union[int, Iterable]) -> Stage:
    """Erosion stage; an int ``n`` means the element ``{-n, ..., 0}``."""
    if isinstance(elem, (int, np.integer)):
        if elem < 0:
            raise ParameterError("erosion size must be >= 0")
        elem = range(-int(elem), 1)
    return Stage(StageKind.EROSION, StructuralElement(elem))


def _fuse(stages: Sequence[Stage]) -> tuple:
    out: list[Stage] = []
    for st in stages:
        if all(o == (0,) * st.dim for o in st.element):
            continue  # identity stage
        if out and out[-1].kind is st.kind:
            out[-1] = Stage(st.kind, out[-1].element + st.element)
        else:
            out.append(st)
    return tuple(out)


@dataclass(frozen=True)
class Cascade:
    """Composition of erosions and dilations, outermost stage first."""

    stages: tuple
    dim: int = 1

    def __init__(self, stages: Iterable[Stage] = (), dim: int | None = None, fuse: bool = True):
        stages = tuple(stages)
        dims = {st.dim for st in stages}
        if len(dims) > 1:
            raise DimensionError("cascade stages mix dimensions")
        if dims:
            d = dims.pop()
            if dim is not None and dim != d:
                raise DimensionError(f"stages are {d}-dimensional, cascade declared {dim}")
            dim = d
        dim = 1 if dim is None else dim
        object.__setattr__(self, "stages", _fuse(stages) if fuse else stages)
        object.__setattr__(self, "dim", dim)

    @classmethod
    def identity(cls, dim: int = 1) -> "Cascade":
        return cls((), dim=dim)

    @classmethod
    def unfused(cls, stages: Iterable[Stage], dim: int | None = None) -> "Cascade":
        """Keep the stage list verbatim (no fusion, identity stages retained)."""
        return cls(stages, dim=dim, fuse=False)

    def __len__(self) -> int:
        return len(self.stages)

    def __matmul__(self, inner: "Cascade") -> "Cascade":
        return compose(self, inner)

    def dual(self) -> "Cascade":
        """Swap erosions and dilations (``S*(x) = -S(-x)``)."""
        return Cascade((st.dual() for st in self.stages), dim=self.dim)

    def fused(self) -> "Cascade":
        return Cascade(self.stages, dim=self.dim)

    def reach(self) -> frozenset:
        return reach(self)

    def apply(self, x, boundary="valid") -> np.ndarray:
        return apply(self, x, boundary)

    def __str__(self) -> str:
        if not self.stages:
            return "id"
        return " ".join(str(st) for st in self.stages)


# -- construction ----------------------------------------------------------

_CASCADE_NAMES = {"L", "U", "LU", "UL", "C", "F"}
_RANK_NAMES = {"MEDIAN", "M", "RANK", "R"}


def lower(n: int) -> Cascade:
    """``L_n = max_n . min_n`` (opening, removes peaks up to width n)."""
    return Cascade([dilation(n), erosion(n)])


def upper(n: int) -> Cascade:
    """``U_n = min_n . max_n`` (closing, removes pits up to width n)."""
    return Cascade([erosion(n), dilation(n)])


def build_basic(name: str, n: int, k: int | None = None):
    """Build one of the named LULU operators or a rank filter.

    Cascade names: ``L``, ``U``, ``LU`` (L_n U_n), ``UL``, ``C``
    (L_n U_n ... L_1 U_1) and ``F`` (U_n L_n ... U_1 L_1). ``Median`` and
    ``Rank`` are stack filters but not cascades; they come back as a
    :class:`~lulu.boolean_function.PBF` on the window ``{-n..n}``.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    key = name.upper()
    if key in _RANK_NAMES:
        from .boolean_function import pbf_of_rank

        w = 2 * n + 1
        if key in ("MEDIAN", "M"):
            k = n + 1
        if k is None or not 1 <= k <= w:
            raise ParameterError(f"rank k must satisfy 1 <= k <= {w}, got {k!r}")
        return pbf_of_rank(w, k)
    if key not in _CASCADE_NAMES:
        raise ParameterError(f"unknown operator name {name!r}")
    if key == "L":
        return lower(n)
    if key == "U":
        return upper(n)
    if key == "LU":
        return compose(lower(n), upper(n))
    if key == "UL":
        return compose(upper(n), lower(n))
    if key == "C":
        out = Cascade.identity()
        for m in range(1, n + 1):
            out = compose(compose(lower(m), upper(m)), out)
        return out
    out = Cascade.identity()
    for m in range(1, n + 1):
        out = compose(compose(upper(m), lower(m)), out)
    return out


def compose(outer: Cascade, inner: Cascade) -> Cascade:
    """``outer . inner`` with same-kind stages fused at the junction."""
    if outer.stages and inner.stages and outer.dim != inner.dim:
        raise DimensionError(f"cannot compose {outer.dim}D with {inner.dim}D cascade")
    dim = outer.dim if outer.stages else inner.dim
    return Cascade(outer.stages + inner.stages, dim=dim)


def reach(c: Cascade) -> frozenset:
    """All input offsets the output at 0 may depend on (Minkowski sum)."""
    acc = frozenset({(0,) * c.dim})
    for st in c.stages:
        acc = minkowski_sum(acc, st.element.offsets)
    return acc


def support(c: Cascade) -> frozenset:
    """Offsets the output at 0 actually depends on.

    This is the window of the cascade's positive Boolean function, which can
    be strictly smaller than :func:`reach` when a condensation drops a
    clause (``max1 min2 max3`` reaches 7 offsets but depends on 5).
    """
    from .boolean_function import pbf_of_cascade

    if not c.stages:
        return frozenset({(0,) * c.dim})
    return frozenset(pbf_of_cascade(c).window)


# -- application -------------------------------------------------------------


class Boundary(enum.Enum):
    EXTEND = "extend"
    REFLECT = "reflect"
    VALID = "valid"

    @classmethod
    def coerce(cls, b) -> "Boundary":
        if isinstance(b, Boundary):
            return b
        key = str(b).lower()
        aliases = {"validonly": "valid", "valid_only": "valid", "edge": "extend"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ParameterError(f"unknown boundary policy {b!r}") from None


def _as_signal(x, dim: int) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim < dim:
        raise DimensionError(f"expected a {dim}D signal, got shape {arr.shape}")
    if arr.size == 0 or any(s == 0 for s in arr.shape[-dim:]):
        raise ParameterError("signal is empty")
    if arr.dtype == object:
        raise ParameterError("signal must be a rectangular numeric array")
    return arr


def _stage_valid(x: np.ndarray, st: Stage) -> np.ndarray:
    """One stage with ValidOnly semantics on the trailing ``dim`` axes."""
    dim = st.dim
    lo, hi = st.element.bounds()
    span = [h - l for l, h in zip(lo, hi)]
    shape = x.shape[-dim:]
    out_shape = [s - w for s, w in zip(shape, span)]
    if any(s <= 0 for s in out_shape):
        raise ParameterError(
            f"signal extent {tuple(shape)} too short for element span {tuple(s + 1 for s in span)}"
        )
    reduce = np.minimum if st.kind is StageKind.EROSION else np.maximum
    lead = (slice(None),) * (x.ndim - dim)
    out = None
    for e in st.element:
        idx = lead + tuple(
            slice(ek - lk, ek - lk + n) for ek, lk, n in zip(e, lo, out_shape)
        )
        view = x[idx]
        if out is None:
            out = view.copy()
        else:
            reduce(out, view, out=out)
    return out


def apply_valid(c: Cascade, x) -> np.ndarray:
    """Exact output on every index whose full window lies inside ``x``.

    Output index ``k`` corresponds to input position ``k - min(reach)``
    (per axis); leading axes of ``x`` beyond the cascade dimension are batch
    axes.
    """
    arr = _as_signal(x, c.dim)
    lo, hi = bounding_box(reach(c))
    shape = arr.shape[-c.dim:]
    if any(s - (h - l) <= 0 for s, l, h in zip(shape, lo, hi)):
        raise ParameterError(
            f"signal extent {tuple(shape)} shorter than cascade support extent "
            f"{tuple(h - l + 1 for l, h in zip(lo, hi))}"
        )
    out = arr
    for st in reversed(c.stages):
        out = _stage_valid(out, st)
    if out is arr:
        out = arr.copy()
    return out


def pad_signal(arr: np.ndarray, lo: Offset, hi: Offset, boundary: Boundary) -> np.ndarray:
    """Pad the trailing axes so a ValidOnly pass returns the input's shape."""
    dim = len(lo)
    pads = [(0, 0)] * (arr.ndim - dim) + [(-l, h) for l, h in zip(lo, hi)]
    if all(a == 0 and b == 0 for a, b in pads):
        return arr
    if boundary is Boundary.EXTEND:
        return np.pad(arr, pads, mode="edge")
    if boundary is Boundary.REFLECT:
        if any(s == 1 for s in arr.shape[-dim:]):
            return np.pad(arr, pads, mode="edge")
        return np.pad(arr, pads, mode="reflect")
    raise AssertionError(boundary)


def apply(c, x, boundary="valid") -> np.ndarray:
    """Filter ``x`` with a cascade (or any object with an ``apply`` method).

    ``valid`` drops indices whose window leaves the signal; ``extend`` and
    ``reflect`` pad the input once and return an output of the input's shape.
    """
    if not isinstance(c, Cascade):
        return c.apply(x, boundary)
    b = Boundary.coerce(boundary)
    arr = _as_signal(x, c.dim)
    if b is Boundary.VALID:
        return apply_valid(c, arr)
    lo, hi = bounding_box(reach(c))
    return apply_valid(c, pad_signal(arr, lo, hi, b))


# -- sequence properties -------------------------------------------------------


def is_n_monotone(x: Sequence[float], n: int) -> bool:
    """True iff every ``n + 1`` consecutive elements are monotone."""
    if n < 1:
        raise ParameterError("n must be positive")
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DimensionError("n-monotonicity is defined for 1D signals")
    if arr.size <= n:
        return True
    d = np.diff(arr)
    windows = np.lib.stride_tricks.sliding_window_view(d, n)
    up = np.all(windows >= 0, axis=1)
    down = np.all(windows <= 0, axis=1)
    return bool(np.all(up | down))


def total_variation(x: Sequence[float]) -> float:
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise DimensionError("total variation is defined for 1D signals")
    return np.abs(np.diff(arr)).sum().item() if arr.size > 1 else 0


# -- signal files --------------------------------------------------------------


def read_signal(path: Union[str, Path], dim: int = 1) -> np.ndarray:
    """One sample per line for 1D, comma-separated rows for 2D."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParameterError(f"{path}: empty signal file")
    if dim == 1:
        return np.array([float(ln) for ln in lines])
    rows = [[float(v) for v in ln.split(",")] for ln in lines]
    if len({len(r) for r in rows}) != 1:
        raise ParameterError(f"{path}: 2D signal rows have unequal length")
    return np.array(rows)


def format_signal(x: np.ndarray) -> str:
    arr = np.asarray(x)

    def fmt(v) -> str:
        v = float(v)
        # integral values print without a trailing ".0"
        if v.is_integer() and abs(v) < 2**53:
            return str(int(v))
        return repr(v)

    if arr.ndim == 1:
        return "\n".join(fmt(v) for v in arr) + "\n"
    return "\n".join(",".join(fmt(v) for v in row) for row in arr) + "\n"
