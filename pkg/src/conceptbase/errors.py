"""Exception hierarchy shared by every conceptbase module."""


class ConceptBaseError(Exception):
    """Base class for all errors raised by this package."""


class KeyNotFoundError(ConceptBaseError):
    """A tree key does not resolve to a live tree."""


class NotFoundError(ConceptBaseError):
    """A descriptor id, result id, global node id or node reference does not resolve."""


class SelfLinkError(ConceptBaseError):
    """Attempt to link a descriptor to itself."""


class StateError(ConceptBaseError):
    """Operation applied to a result that is unknown or already settled."""


class QueryParseError(ConceptBaseError):
    """Malformed query text. Carries the character position of the fault."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class PersistenceError(ConceptBaseError):
    """I/O failure while saving or loading a base document."""


class UnsupportedVersionError(PersistenceError):
    """Document format_version is not one this build reads."""


class DocumentParseError(PersistenceError):
    """Structurally malformed document. Carries the JSON path of the fault."""

    def __init__(self, message: str, path: str):
        super().__init__(f"{message} (at {path})")
        self.path = path


class CorruptBaseError(PersistenceError):
    """A loaded document violates the base's structural invariants."""
