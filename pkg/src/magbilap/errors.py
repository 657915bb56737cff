"""Exception types shared across the package."""


class MagbilapError(Exception):
    """Base class for all errors raised by this package."""


class InputError(MagbilapError, ValueError):
    """Malformed or out-of-domain input (unknown vertex, bad parameter)."""


class GraphValidationError(InputError):
    """A graph violates one of the structural invariants.

    ``kind`` is a short stable label, e.g. ``"asymmetric weight"`` or
    ``"disconnected"``, so callers can branch on it.
    """

    def __init__(self, kind, message=None):
        self.kind = kind
        super().__init__(f"{kind}: {message}" if message else kind)


class HorizonError(MagbilapError):
    """A quantity needs a larger generated ball than is available."""


class MarginError(MagbilapError):
    """An operator was evaluated where part of its stencil is not generated."""
