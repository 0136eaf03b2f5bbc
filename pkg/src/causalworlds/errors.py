"""Exception types shared across the package."""


class CausalWorldsError(Exception):
    """Base class for all errors raised by this package."""


class InputError(CausalWorldsError):
    """Malformed arguments: unknown ids, non-total acts, bad instance names."""


class SizeLimitError(InputError):
    """A search or materialization exceeded a configured size guard."""


class UnquantifiedTableError(CausalWorldsError):
    """An operation needing state priors was given a possible-flag table."""


class DefinednessError(CausalWorldsError):
    """A mapping variable is not uniquely identified by the table.

    Carries the ids of the states in which identification fails.
    """

    def __init__(self, message: str, states: tuple = ()):
        super().__init__(message)
        self.states = tuple(states)


class NotAFunctionError(DefinednessError):
    """Two acts agree on the arguments but disagree on the target."""


class ImpossibleEvidenceError(CausalWorldsError):
    """Evidence (or an evidence/act combination) has zero probability."""


class MissingUtilityError(CausalWorldsError):
    """A policy or value-of-information query on a diagram without utilities."""


class ResponsivenessError(CausalWorldsError):
    """Value of information requested for a variable that responds to acts."""


class FormError(CausalWorldsError):
    """A diagram violates the structural form required by the operation."""


class SchemaError(CausalWorldsError):
    """A model file does not match the documented schema.

    ``path`` locates the offending field, e.g. ``states[3].prior``.
    """

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
