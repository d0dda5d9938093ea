"""Exception hierarchy shared across the package."""

from __future__ import annotations


class Q2QError(Exception):
    """Base class for all package errors."""


class ConfigurationError(Q2QError):
    """Bad or missing configuration detected at startup (not per call)."""


class TransportError(Q2QError):
    """A remote endpoint (LLM, embedding, SPARQL) could not be reached.

    Retryable: callers with a retry policy may re-attempt.
    """


class MalformedOutputError(Q2QError):
    """Generated model output could not be parsed into any question.

    Carries the raw text so failures can be inspected.
    """

    def __init__(self, message: str, raw_output: str = ""):
        super().__init__(message)
        self.raw_output = raw_output


class StoreLoadError(Q2QError):
    """The on-disk content store file is corrupt or unreadable."""


class IndexFormatError(Q2QError):
    """Index file is corrupt. Message names the byte offset of the defect."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class EmptyIndexError(Q2QError):
    """Search requested against an index with no entries."""


class DanglingHashError(Q2QError):
    """An index entry points at a content hash absent from every store."""

    def __init__(self, hash_hex: str):
        super().__init__(f"index entry resolves to no stored content: {hash_hex}")
        self.hash_hex = hash_hex
