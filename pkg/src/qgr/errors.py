"""Exception hierarchy shared by all qgr modules."""

from __future__ import annotations


class QgrError(Exception):
    """Base class for every error raised by qgr."""


class ParseError(QgrError, ValueError):
    """Malformed quiver or module input.

    ``line`` and ``column`` are 1-based when known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str | None = None):
        self.line = line
        self.column = column
        self.source = source
        where = source or "<input>"
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


class ResourceLimitError(QgrError):
    """A configured cap (path count, block size, permutation search) was exceeded."""


class CoreRequired(QgrError):
    """The operation needs a quiver with no sinks and no sources."""

    kind = "sink-or-source"

    def __init__(self, vertex: str):
        self.vertex = vertex
        super().__init__(
            f"vertex {vertex!r} is a {self.kind}; reduce the quiver with core() first"
        )


class SinkPresent(CoreRequired):
    kind = "sink"


class SourcePresent(CoreRequired):
    kind = "source"


class InvalidSection(QgrError):
    """An arrow section does not pick one incoming arrow per vertex."""


class WindowTooShort(QgrError):
    """The degree window does not reach far enough past the requested level."""


class UnverifiedTail(QgrError):
    """The tail of a representation is not projective on the supplied window."""


class NotASink(QgrError):
    pass


class NotASource(QgrError):
    pass


class NotInjective(QgrError):
    pass


class NotAHomomorphism(QgrError):
    pass
