"""Exception hierarchy shared across the toolkit."""


class CrssimError(Exception):
    """Base class for all toolkit errors."""


class ParseError(CrssimError):
    """A config or data document could not be parsed.

    Carries the 1-based ``line`` of the offending content when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptySlotList(ParseError):
    """Domain config declares no slots."""


class DuplicateSlot(ParseError):
    """Domain config declares the same slot twice (case-insensitive)."""


class UnknownSlot(ParseError):
    """A slot name is not declared by the domain."""


class DuplicateItem(ParseError):
    """Two item rows share the same item id."""


class RatingOutOfScale(ParseError):
    """A rating value lies outside the declared scale."""


class SchemaVersionMismatch(ParseError):
    """A persisted document carries an unsupported schema version."""


class EmptySample(CrssimError):
    """A training operation received no samples."""


class UnknownIntent(CrssimError):
    """An intent label is referenced but not declared."""


class NoTerminalIntent(CrssimError):
    """The interaction model does not declare its terminal intent."""


class MissingSlotValue(CrssimError):
    """A template placeholder has no value to fill it with."""


class InsufficientRatingsUsers(CrssimError):
    """Grounded population generation needs more distinct ratings users."""


class AgentError(CrssimError):
    """A participant failed mid-conversation; the dialogue is aborted."""


class TransportError(AgentError):
    """The remote agent could not be reached (after retries)."""


class ProtocolError(AgentError):
    """The remote agent sent a response that violates the wire protocol."""


class NoDialogues(CrssimError):
    """Evaluation was asked to run on an empty dialogue set."""
