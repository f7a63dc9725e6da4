"""Exception hierarchy shared by every module."""


class FairMatchError(Exception):
    """Base class for all package errors."""


class InputError(FairMatchError, ValueError):
    """Malformed instance, matching, or solver arguments."""


class ResourceError(FairMatchError, RuntimeError):
    """A configured budget (variables, nodes, enumeration size) was exceeded."""


class InternalError(FairMatchError, AssertionError):
    """A state that a correct implementation can never reach."""
