"""Exception types shared across the package."""


class AtlasError(Exception):
    pass


class PrecisionError(AtlasError):
    """A capped value is indistinguishable from zero at its stored precision."""


class NoSquareRootError(AtlasError):
    pass


class NotNormError(AtlasError):
    pass


class NotRegularSemisimpleError(AtlasError):
    pass


class ExcludedCaseError(AtlasError):
    """The split case F' = F0 x F0, which the comparison routines skip."""


class UnrealizableError(AtlasError):
    pass


class CayleyUndefinedError(AtlasError):
    pass


class StabilizationError(AtlasError):
    """A shell sum did not stabilize within the window."""


class ConductorError(AtlasError):
    """A predicate could not be decided within the subdivision depth cap."""


class PoleError(AtlasError):
    """Evaluation at s = 0 of a rational function with a pole there."""
