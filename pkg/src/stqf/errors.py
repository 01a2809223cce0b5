"""Exception hierarchy shared by the library and the command line front end."""


class StqfError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(StqfError):
    """Malformed textual or JSON input.  CLI exit code 2."""


class PreconditionError(StqfError):
    """An operation was called outside its stated domain.  CLI exit code 3."""


class RankMismatchError(PreconditionError):
    """Operands live in free modules of different rank."""


class IsotropicVectorError(PreconditionError):
    """An anisotropic vector was required but q(x) = 0."""


class PropertyViolation(StqfError):
    """A theorem-vs-oracle comparison failed.  CLI exit code 1."""
