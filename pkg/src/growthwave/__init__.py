"""growthwave: weight-adapted wavelet analysis of growth spaces of harmonic
functions on the periodized upper half-space.

The pipeline: a doubling weight yields a scale plan (weights), the plan
selects a compactly supported orthonormal wavelet basis and a block
decomposition (wavelets), boundary data extends harmonically by spectral
Poisson multipliers (poisson), membership in the growth space is checked
two-sidedly (growth), vertical averages are approximated by a dyadic
martingale with a law-of-the-iterated-logarithm harness (oscillation), and
the boundary coefficients project onto the consistency lattice of the
weighted sequence space (seqspace).
"""

from .errors import (
    BandlimitError,
    CascadeError,
    GrowthwaveError,
    NumericalError,
    PowerTypeError,
    ScaleBandError,
    ValidationError,
)
from .grid import GridFunction
from .weights import (
    ScalePlan,
    Weight,
    default_band_ratio,
    doubling_constant,
    make_plan,
    power_type_gap,
    scale_sequence,
    smoothness_exponent,
    weight_from_descriptor,
)

__version__ = "0.1.0"
SCHEMA_VERSION = "growthwave/1"
