"""Exception and warning types shared across the package."""


class MultilevyError(Exception):
    """Base class for all package-specific errors."""


class InputError(MultilevyError, ValueError):
    """Invalid argument (bad shape, negative time, malformed config)."""


class DimensionMismatchError(InputError):
    """A point or field does not match the dimension of the object acting on it."""


class SymbolIntegrityError(MultilevyError):
    """A symbol evaluation violated a structural guarantee (e.g. Hermitian symmetry)."""


class CapabilityError(MultilevyError):
    """The request is valid but outside what this implementation supports."""


class GridTooSmallError(MultilevyError):
    """The multiplier has not decayed at the frequency-grid boundary."""


class AccuracyError(MultilevyError):
    """A computed quantity missed its accuracy contract (e.g. mass deviation)."""


class ContractError(MultilevyError):
    """A check was invoked on inputs for which it is not meaningful."""


class AccuracyWarning(UserWarning):
    """Non-fatal accuracy diagnostic (spectral tails, slow decay)."""
