"""Degree windows, certification statuses, and the package error types.

A window is a closed integer interval ``(lo, hi)`` of degrees on which a
value is certified.  ``None`` means the object is complete: finitely
supported and exactly zero outside its support.  Every reported dimension
carries one of the statuses below; nothing is ever silently truncated.
"""

from __future__ import annotations

from dataclasses import dataclass


EXACT = "EXACT"
STABILIZED = "STABILIZED"
UNSTABLE = "UNSTABLE"
UNDETERMINED = "UNDETERMINED"

NODE_EXACT = "EXACT"
NODE_NOT_EXACT = "NOT-EXACT"
NODE_UNDETERMINED = "UNDETERMINED"


class DgaError(Exception):
    """Base class for engine errors."""


class ValidationError(DgaError):
    """An algebraic identity failed; carries witness descriptions."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class WindowError(DgaError):
    """A computation would need degrees outside a certified window."""


class ScopeError(DgaError):
    """The request is outside the supported scope (CLI exit code 4)."""


# a window bound of None means unbounded on that side
Window = tuple[int | None, int | None]


def window_contains(window: Window | None, degree: int) -> bool:
    if window is None:
        return True
    lo, hi = window
    return (lo is None or lo <= degree) and (hi is None or degree <= hi)


def window_covers(outer: Window | None, inner: Window) -> bool:
    if outer is None:
        return True
    lo, hi = outer
    ilo, ihi = inner
    if lo is not None and (ilo is None or ilo < lo):
        return False
    if hi is not None and (ihi is None or ihi > hi):
        return False
    return True


def _maxopt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _minopt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def intersect(a: Window | None, b: Window | None) -> Window | None:
    if a is None:
        return b
    if b is None:
        return a
    return (_maxopt(a[0], b[0]), _minopt(a[1], b[1]))


def shift_window(window: Window | None, offset: int) -> Window | None:
    if window is None:
        return None
    lo, hi = window
    return (None if lo is None else lo + offset, None if hi is None else hi + offset)


def shrink(window: Window | None, margin: int) -> Window | None:
    """Shrink by margin on both sides; used for homology certification."""
    if window is None:
        return None
    lo, hi = window
    return (None if lo is None else lo + margin, None if hi is None else hi - margin)


def require_window(outer: Window | None, inner: Window, what: str) -> None:
    if not window_covers(outer, inner):
        raise WindowError(
            f"{what}: requested degrees {list(inner)} exceed certified window {list(outer)}"
        )


@dataclass(frozen=True)
class Certificate:
    """Certification tag for a reported dimension."""

    status: str  # EXACT | STABILIZED | UNSTABLE | UNDETERMINED
    cutoff: int | None = None
    detail: str = ""

    def is_certified(self) -> bool:
        return self.status in (EXACT, STABILIZED)

    def describe(self) -> str:
        if self.status == EXACT:
            return EXACT
        if self.cutoff is None:
            return self.status
        return f"{self.status}({self.cutoff})"


CERT_EXACT = Certificate(EXACT)
