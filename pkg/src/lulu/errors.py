"""Exception types and capacity limits shared across the package."""

from __future__ import annotations

import os

DEFAULT_ENUM_CAP = 26
DEFAULT_INCL_EXCL_CAP = 22
DEFAULT_TERM_CAP = 100_000


class ParameterError(ValueError):
    """Invalid operator parameters (window size, rank, offsets...)."""


class DimensionError(ValueError):
    """Operands live in different dimensions."""


class CapacityError(RuntimeError):
    """A computation would exceed a configured size cap."""

    def __init__(self, what: str, size: int, cap: int, suggestion: str = ""):
        self.what = what
        self.size = size
        self.cap = cap
        self.suggestion = suggestion
        msg = f"{what}: size {size} exceeds cap {cap}"
        if suggestion:
            msg += f" ({suggestion})"
        super().__init__(msg)


def enum_cap() -> int:
    """Enumeration cap in variables; ``LULU_ENUM_CAP`` overrides the default."""
    raw = os.environ.get("LULU_ENUM_CAP")
    if raw is None:
        return DEFAULT_ENUM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ParameterError(f"LULU_ENUM_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ParameterError("LULU_ENUM_CAP must be positive")
    # 62 keeps subset masks inside signed 64-bit lanes
    return min(cap, 62)
