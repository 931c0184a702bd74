"""Exception hierarchy shared by the whole engine.

Every error raised on purpose derives from :class:`MentalModelError` so that
callers (CLI, HTTP service) can map engine failures to exit codes / status
codes without fishing for stray ValueErrors.
"""


class MentalModelError(Exception):
    """Base class for all engine errors."""


# --- building a mental model -------------------------------------------------

class DuplicateKind(MentalModelError):
    pass


class DuplicateTemplate(MentalModelError):
    pass


class OverlappingConstantAndAttribute(MentalModelError):
    pass


class MissingAttribute(MentalModelError):
    pass


class UnknownAttribute(MentalModelError):
    pass


class TypeMismatch(MentalModelError):
    pass


class UnknownKind(MentalModelError):
    pass


class KindMismatch(MentalModelError):
    pass


class InconsistentModelOf(MentalModelError):
    pass


# --- serialization ------------------------------------------------------------

class MalformedDocument(MentalModelError):
    pass


class SchemaVersionMismatch(MentalModelError):
    pass


# --- explanation search -------------------------------------------------------

class UnknownEntity(MentalModelError):
    pass


class UnknownRelation(MentalModelError):
    pass


class NoMatchingModel(MentalModelError):
    """No model matches the questioned relation.

    Signals an incomplete mental model; callers report it to the user
    instead of treating it as fatal.
    """


# --- dialogue -----------------------------------------------------------------

class ParseError(MentalModelError):
    """A question string did not parse; carries the offending position."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class TargetNotYetPresented(MentalModelError):
    """Question target is outside the dialogue scope (not shown yet)."""


# --- neural network adapter ---------------------------------------------------

class ShapeMismatch(MentalModelError):
    pass


class InputLengthMismatch(MentalModelError):
    pass


class RecordMismatch(MentalModelError):
    pass


# --- Prolog adapter -----------------------------------------------------------

class PrologSyntaxError(MentalModelError):
    """Program text did not match the grammar; carries line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class VariableNotAllowed(PrologSyntaxError):
    pass


class NegationNotAllowed(PrologSyntaxError):
    pass


class TreeProgramMismatch(MentalModelError):
    pass


# --- service ------------------------------------------------------------------

class UnknownModel(MentalModelError):
    pass


class UnknownSession(MentalModelError):
    pass
