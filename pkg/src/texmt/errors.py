"""Exception types shared across the package."""

from __future__ import annotations


class TexmtError(Exception):
    """Base class for every error raised by texmt."""


# -- parsing -----------------------------------------------------------------


class ParseError(TexmtError):
    """A LaTeX source could not be parsed.

    ``position`` is a character offset into the original source; ``line`` and
    ``column`` are 1-based and filled in by the parser when the source is known.
    """

    def __init__(self, message: str, position: int, line: int | None = None, column: int | None = None):
        self.position = position
        self.line = line
        self.column = column
        self.message = message
        super().__init__(self._format())

    def _format(self) -> str:
        if self.line is not None:
            return f"{self.message} (line {self.line}, column {self.column})"
        return f"{self.message} (offset {self.position})"

    def locate(self, source: str) -> "ParseError":
        self.line = source.count("\n", 0, self.position) + 1
        self.column = self.position - (source.rfind("\n", 0, self.position) + 1) + 1
        self.args = (self._format(),)
        return self


class UnbalancedDelimiter(ParseError):
    def __init__(self, delimiter: str, position: int):
        self.delimiter = delimiter
        super().__init__(f"unbalanced delimiter {delimiter!r}", position)


class UnmatchedEnvironment(ParseError):
    def __init__(self, name: str, position: int):
        self.name = name
        super().__init__(f"unmatched environment {name!r}", position)


# -- math tokens -------------------------------------------------------------


class TokenError(TexmtError):
    pass


class UntokenizedMath(TokenError):
    """A Math inline reached the joiner without being replaced by a token."""


class UnprotectedInline(TokenError):
    """An opaque inline reached the joiner without being replaced by a placeholder."""


class MissingToken(TokenError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"translation references unknown token {name}")


class DroppedToken(TokenError):
    def __init__(self, names):
        self.names = list(names)
        super().__init__("tokens missing from translation: " + ", ".join(self.names))


# -- glossary ----------------------------------------------------------------


class GlossaryError(TexmtError):
    pass


class MalformedLine(GlossaryError):
    def __init__(self, lineno: int, line: str = ""):
        self.lineno = lineno
        super().__init__(f"malformed glossary line {lineno}: {line!r}")


class EmptyGlossary(GlossaryError):
    pass


# -- backends and routing ----------------------------------------------------


class BackendError(TexmtError):
    pass


class Timeout(BackendError):
    pass


class Unreachable(BackendError):
    pass


class MalformedResponse(BackendError):
    pass


class BothBackendsFailed(TexmtError):
    def __init__(
        self,
        sentence_id: str,
        primary_error: Exception | None,
        fallback_error: Exception | None,
        reason: str = "",
    ):
        self.sentence_id = sentence_id
        self.reason = reason
        self.primary_error = primary_error
        self.fallback_error = fallback_error
        super().__init__(f"both backends failed on sentence {sentence_id}: {fallback_error}")


class EmptyScoreList(ValueError, TexmtError):
    pass


# -- corpus and evaluation ---------------------------------------------------


class BadRatios(ValueError, TexmtError):
    pass


class EmptyCorpus(ValueError, TexmtError):
    pass


class MismatchedLengths(ValueError, TexmtError):
    pass


# -- French post-processing --------------------------------------------------


class NoDocumentClass(TexmtError):
    pass
