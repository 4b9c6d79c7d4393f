"""Orthonormal scaling filters of the compactly supported extremal-phase
family, computed by spectral factorization at extended precision.

The order-p filter has 2p taps, p vanishing moments, sums to sqrt(2) and
has unit energy.  Roots of the half-band polynomial are extracted with
mpmath so the high orders stay accurate to ~1e-14 in double precision.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, sqrt

import mpmath as mp
import numpy as np

from .errors import ValidationError

__all__ = ["scaling_filter", "wavelet_filter", "MAX_ORDER"]

MAX_ORDER = 20

# published minimal Holder exponents of the order-p scaling functions
# (standard smoothness tables for this family); order 1 is discontinuous
HOLDER_EXPONENTS = {
    1: 0.0,
    2: 0.5500,
    3: 1.0878,
    4: 1.6179,
    5: 1.9690,
    6: 2.1891,
    7: 2.4604,
    8: 2.7608,
    9: 3.0736,
    10: 3.3614,
}


def holder_exponent(order: int) -> float:
    """Tabulated Holder regularity for small orders, linear growth beyond."""
    if order in HOLDER_EXPONENTS:
        return HOLDER_EXPONENTS[order]
    return HOLDER_EXPONENTS[10] + 0.3 * (order - 10)


@lru_cache(maxsize=None)
def scaling_filter(order: int) -> np.ndarray:
    """Low-pass filter h_0..h_{2p-1} of the order-p basis."""
    if not 1 <= order <= MAX_ORDER:
        raise ValidationError(f"filter order must be in [1, {MAX_ORDER}], got {order}")
    if order == 1:
        h = np.array([1.0, 1.0]) / sqrt(2.0)
        h.setflags(write=False)
        return h

    with mp.workdps(60):
        p = order
        # half-band residual P(y) = sum C(p-1+k, k) y^k
        coeffs = [mp.mpf(comb(p - 1 + k, k)) for k in range(p - 1, -1, -1)]
        roots_y = mp.polyroots(coeffs, maxsteps=200, extraprec=120)
        # each y-root maps to a conjugate pair z + 1/z = 2 - 4y; keep |z| < 1
        q_poly = [mp.mpf(1)]
        for y in roots_y:
            b = 2 - 4 * y
            disc = mp.sqrt(b * b - 4)
            z = (b + disc) / 2
            if abs(z) > 1:
                z = (b - disc) / 2
            q_poly = _poly_mul(q_poly, [mp.mpf(1), -z])
        q_poly = [mp.re(c) for c in q_poly]
        # multiply by ((1+z)/2)^p and normalize the DC gain to sqrt(2)
        for _ in range(p):
            q_poly = [c / 2 for c in _poly_mul(q_poly, [mp.mpf(1), mp.mpf(1)])]
        gain = sum(q_poly)
        h = [mp.sqrt(2) * c / gain for c in q_poly]
        arr = np.array([float(c) for c in h])

    # extremal-phase convention: energy toward the front
    front = float(np.sum(np.arange(arr.size) * arr**2))
    if front > (arr.size - 1) / 2:
        arr = arr[::-1].copy()
    arr.setflags(write=False)
    _check_filter(arr, order)
    return arr


def _poly_mul(a, b):
    out = [mp.mpf(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _check_filter(h: np.ndarray, order: int):
    if abs(h.sum() - sqrt(2.0)) > 1e-12:
        raise ValidationError(f"order-{order} filter sum deviates from sqrt(2)")
    for shift in range(1, order):
        if abs(np.dot(h[: h.size - 2 * shift], h[2 * shift:])) > 1e-12:
            raise ValidationError(f"order-{order} filter fails shift-{shift} orthogonality")
    if abs(np.dot(h, h) - 1.0) > 1e-12:
        raise ValidationError(f"order-{order} filter energy deviates from 1")


def wavelet_filter(h: np.ndarray) -> np.ndarray:
    """High-pass mirror g_k = (-1)^k h_{L-1-k}."""
    g = h[::-1].copy()
    g[1::2] *= -1.0
    g.setflags(write=False)
    return g
