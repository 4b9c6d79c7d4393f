"""Sampled functions on the unit torus [0, 1).

Everything downstream (Poisson extensions, wavelet transforms, pairings)
operates on real samples at the N = 2^J nodes k/N.  Integrals are trapezoid
sums, which coincide with plain means on the torus and are spectrally
accurate for smooth periodic integrands.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = ["GridFunction"]


@dataclass(frozen=True)
class GridFunction:
    """Real samples of a function on the torus at nodes k/2^J."""

    samples: np.ndarray
    J: int = field(default=-1)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        n = samples.size
        if n < 2 or n & (n - 1):
            raise ValidationError(f"sample count {n} is not a power of two >= 2")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("samples contain non-finite values")
        J = int(np.log2(n))
        if self.J >= 0 and self.J != J:
            raise ValidationError(f"J={self.J} inconsistent with {n} samples")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "J", J)

    @property
    def n(self) -> int:
        return self.samples.size

    def nodes(self) -> np.ndarray:
        return np.arange(self.n) / self.n

    @classmethod
    def from_function(cls, fn, J: int) -> "GridFunction":
        n = 1 << J
        return cls(np.asarray(fn(np.arange(n) / n), dtype=float))

    @classmethod
    def constant(cls, value: float, J: int) -> "GridFunction":
        return cls(np.full(1 << J, float(value)))

    # torus quadrature: mean == trapezoid for periodic samples
    def integral(self) -> float:
        return float(self.samples.mean())

    def l1(self) -> float:
        return float(np.abs(self.samples).mean())

    def sup(self) -> float:
        return float(np.abs(self.samples).max())

    def dot(self, other: "GridFunction") -> float:
        """Pairing integral of two grid functions."""
        if other.n != self.n:
            raise ValidationError("resolution mismatch in pairing")
        return float((self.samples * other.samples).mean())

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.samples + other.samples)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.samples - other.samples)

    def __mul__(self, scalar: float) -> "GridFunction":
        return GridFunction(self.samples * float(scalar))

    __rmul__ = __mul__
