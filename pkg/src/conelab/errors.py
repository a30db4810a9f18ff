"""Exception types shared across the package."""


class ConelabError(Exception):
    """Base class for all conelab errors."""


class InputError(ConelabError, ValueError):
    """Invalid argument: wrong shape, range, or malformed input file."""


class DegenerateInputError(InputError):
    """Input is numerically degenerate (e.g. rank-deficient frame)."""


class CapacityError(ConelabError):
    """Problem size exceeds what the implementation can answer honestly."""


class NumericalUnderflowError(ConelabError):
    """An iterate collapsed below the representable range."""


class InternalConsistencyError(ConelabError):
    """Two certificates that can never coexist were both verified; a bug."""
