"""Exception types raised by fastconnect."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DirectMethodRequired(DomainError):
    """Input is too short for a single level of the hierarchy; use the direct transform."""


class SizeError(ValueError):
    """Vector length incompatible with a plan."""


class DirectionError(ValueError):
    """Transform direction does not match the plan."""


class ResourceError(RuntimeError):
    """Requested computation exceeds a configured cost guard."""


class FormatError(ValueError):
    """Malformed vector or plan file."""
