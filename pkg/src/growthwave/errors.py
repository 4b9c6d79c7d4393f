"""Exception taxonomy.

ValidationError covers bad inputs and contract violations (CLI exit 1);
NumericalError covers internal numerical failures (CLI exit 2).
"""


class GrowthwaveError(Exception):
    pass


class ValidationError(GrowthwaveError):
    pass


class NumericalError(GrowthwaveError):
    pass


class ScaleBandError(ValidationError):
    """A weight band [A^l, A^(l+1)) is missed by every dyadic scale."""

    def __init__(self, level: int, message: str):
        self.level = level
        super().__init__(message)


class CascadeError(NumericalError):
    """Cascade tabulation failed to reach its fixed point."""


class BandlimitError(ValidationError):
    """A test function is not bandlimited to the required ball."""

    def __init__(self, frequency: int, message: str):
        self.frequency = frequency
        super().__init__(message)


class PowerTypeError(ValidationError):
    """An operation that needs uniformly bounded scale gaps got a weight
    without them (or vice versa)."""
