"""Line-oriented diagnostics shared by every pipeline stage."""

from __future__ import annotations

from dataclasses import dataclass

INFO = "INFO"
WARNING = "WARNING"
ERROR = "ERROR"


@dataclass(frozen=True)
class Diagnostic:
    level: str
    location: str
    message: str

    def format(self) -> str:
        return f"{self.level}\t{self.location}\t{self.message}"


def emit(diagnostics: list | None, level: str, location: str, message: str) -> None:
    if diagnostics is not None:
        diagnostics.append(Diagnostic(level, location, message))


def has_warnings(diagnostics) -> bool:
    return any(d.level in (WARNING, ERROR) for d in diagnostics)
