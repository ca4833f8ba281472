"""Exception types shared by the toolkit."""


class KneeRocError(ValueError):
    """Base class for every error raised by kneeroc."""

    exit_code = 4


class InputError(KneeRocError):
    """Malformed or out-of-range input (bad file, bad parameter)."""

    exit_code = 2


class InsufficientDataError(KneeRocError):
    """Too few values to carry out the requested computation."""

    exit_code = 3


class InvariantError(KneeRocError):
    """An internal consistency check failed; indicates a bug, not bad input."""

    exit_code = 4
