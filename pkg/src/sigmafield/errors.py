"""Exception types shared across the package.

Everything that signals bad *data* subclasses ValueError, so callers can
catch one class when they do not care which contract was violated. Guard
trips are RuntimeError: the input may be fine, it is just too big.
"""


class SpaceMismatchError(ValueError):
    """Two values that must live on the same sample space do not."""


class GuardExceededError(RuntimeError):
    """An enumeration would exceed its configured size bound."""


class NonMeasurableSetError(ValueError):
    """A set outside the sigma-field was used where a measurable one is required."""


class InconsistentMeasureError(ValueError):
    """The assigned masses admit no additive solution."""


class UnderdeterminedMeasureError(ValueError):
    """The assigned masses do not pin down a mass for every atom."""

    def __init__(self, message: str, free_atoms: tuple[str, ...] = ()):
        super().__init__(message)
        self.free_atoms = free_atoms


class NegativeAtomMassError(ValueError):
    """Solving the assignment forces a negative mass onto some atom."""


class ConditionalPmfError(ValueError):
    """A per-atom conditional p.m.f. violates its contract."""


class UnsupportedDistributionError(ValueError):
    """A value distribution puts positive mass outside the attained range."""


class PresentationError(ValueError):
    """A countable presentation is structurally unusable."""


class IndexerInconsistencyError(PresentationError):
    """The atom indexer disagrees with the atom descriptors."""


class TailUndefinedError(ValueError):
    """Tail mass was requested for a finite atom."""
