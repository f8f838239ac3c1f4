"""Error types shared by the whole toolkit.

Every failure carries a short machine-readable code (the same codes the
diagnostics use) plus an optional source location, so the CLI and the serve
API can report them uniformly.
"""

from __future__ import annotations

from typing import Optional

from .model import Diagnostic, SourceLocation


class UimlError(Exception):
    """Domain error with a stable code and optional source location."""

    def __init__(self, code: str, message: str, location: Optional[SourceLocation] = None):
        super().__init__(f"{code}: {message}" if location is None
                         else f"{code}: {message} (at {location.line}:{location.column})")
        self.code = code
        self.message = message
        self.location = location

    def diagnostic(self) -> Diagnostic:
        return Diagnostic("error", self.code, self.message,
                          self.location or SourceLocation(0, 0, 0))


class MalformedXmlError(UimlError):
    """Input is not well-formed XML; distinct because the CLI maps it to exit 2."""

    def __init__(self, message: str, location: Optional[SourceLocation] = None):
        super().__init__("MalformedXml", message, location)
