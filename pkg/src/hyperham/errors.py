class HyperhamError(Exception):
    """Base class for library errors."""


class ParameterError(HyperhamError, ValueError):
    """An argument is outside the documented domain of an operation."""


class DomainError(HyperhamError, ValueError):
    """The input is well formed but the requested object is undefined for it."""


class ResourceError(HyperhamError, RuntimeError):
    """A configured size or work budget would be exceeded."""


class SearchExhausted(HyperhamError, RuntimeError):
    """A constructive search ran out of candidates."""


class StageFailure(HyperhamError, RuntimeError):
    def __init__(self, stage: str, reason: str, margins: dict | None = None):
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.reason = reason
        self.margins = dict(margins or {})


class FormatError(HyperhamError, ValueError):
    """Malformed serialized input; the message carries the offending position."""


class SelfCheckError(HyperhamError, AssertionError):
    """A constructed object failed its own post-construction verification."""
