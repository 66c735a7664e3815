"""Exception types shared across the package."""

from __future__ import annotations


class QkdRingError(Exception):
    """Base class for all package errors."""


class DomainError(QkdRingError, ValueError):
    """An argument lies outside the domain of the function."""


class DegenerateChannelError(QkdRingError, ValueError):
    """The single-photon yield vanished, so the error rate is undefined."""


class InvalidProfileError(QkdRingError, ValueError):
    """A profile produces no key even at zero attenuation."""


class ConfigError(QkdRingError, ValueError):
    """Bad configuration: unknown keys, unknown profile names, invalid values."""


class InfeasibleScheduleError(QkdRingError):
    """A switched link is at or beyond cutoff, so its time share is unbounded."""

    def __init__(self, node: int, peer: int, attenuation_db: float) -> None:
        self.node = node
        self.peer = peer
        self.attenuation_db = attenuation_db
        super().__init__(
            f"switched link ({node}, {peer}) at {attenuation_db:.4f} dB has zero key rate"
        )


class UndefinedComparisonError(QkdRingError, ValueError):
    """Both architectures deliver zero key, so the normalized difference is undefined."""


class LogParseError(QkdRingError, ValueError):
    def __init__(self, line: int, message: str, path: str | None = None) -> None:
        self.line = line
        self.path = path
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {message}")


class EmptySeriesError(QkdRingError, ValueError):
    """A log contained no data rows."""


class InsufficientDataError(QkdRingError, ValueError):
    """Fewer records than a summary needs."""
