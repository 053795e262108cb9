"""Common exception hierarchy.

Every error raised by fairvoc on bad input derives from FairvocError so the
CLI can map it to a usage/config exit code. Errors that correspond to a
stable diagnostic carry a short machine-readable ``code`` (``E-...``).
"""

from __future__ import annotations


class FairvocError(Exception):
    """Base class for all fairvoc errors."""

    code: str | None = None

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def __str__(self) -> str:
        base = super().__str__()
        if self.code:
            return f"{self.code}: {base}"
        return base
