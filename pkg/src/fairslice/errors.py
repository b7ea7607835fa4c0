"""Exception hierarchy.

Everything raised deliberately by this package derives from FairsliceError,
so callers can catch one type at the boundary. The CLI maps ParseError and
its kin to exit code 2.
"""


class FairsliceError(Exception):
    """Base class for all errors raised by fairslice."""


class OutOfRangeError(FairsliceError):
    """An interval endpoint lies outside [0, 1]."""


class MalformedIntervalError(FairsliceError):
    """An interval has its left endpoint strictly greater than its right."""


class ParseError(FairsliceError):
    """Input text or JSON could not be interpreted."""


class DuplicateAgentIdError(ParseError):
    """Two agents in one instance share an id."""


class NotPrefixFormError(FairsliceError):
    """A mechanism requiring prefix reports [0, x] received something else."""


class ShapeMismatchError(FairsliceError):
    """Agent counts of two paired objects disagree."""


class PreconditionUnmetError(FairsliceError):
    """A check was invoked on inputs outside its stated domain."""


class SearchSpaceTooLargeError(FairsliceError):
    """An exhaustive search was requested beyond its hard size cap."""
