"""Doubling weights and the scale plans they induce.

A weight v is continuous, non-increasing, equals 1 for t > 1, blows up at
0+, and satisfies v(t) <= D v(2t).  A ScalePlan packages the quantities the
decomposition machinery needs: the band ratio A, the dyadic exponents
alpha_l with v(2^-alpha_l) in [A^l, A^(l+1)), the smoothness exponent m
with its geometric-decay certificate gamma, and the bounded-gap constant d
when the gaps stabilize (power-type weights).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ScaleBandError, ValidationError

__all__ = [
    "Weight",
    "ScalePlan",
    "weight_from_descriptor",
    "doubling_constant",
    "scale_sequence",
    "smoothness_exponent",
    "power_type_gap",
    "default_band_ratio",
    "make_plan",
]

_ALPHA_SEARCH_CAP = 1 << 24
_M_CAP = 64


@dataclass(frozen=True)
class Weight:
    """Evaluatable doubling weight; family is 'power', 'logpow' or 'table'."""

    family: str
    a: float = 0.0
    b: float = 0.0
    table_t: Optional[np.ndarray] = None
    table_v: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.family == "power":
            if not self.a > 0:
                raise ValidationError("power weight needs exponent a > 0")
        elif self.family == "logpow":
            if not self.b > 0:
                raise ValidationError("logpow weight needs exponent b > 0")
        elif self.family == "table":
            self._init_table()
        else:
            raise ValidationError(f"unknown weight family {self.family!r}")

    def _init_table(self):
        t = np.asarray(self.table_t, dtype=float)
        v = np.asarray(self.table_v, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 3:
            raise ValidationError("table weight needs matching t/v arrays, >= 3 samples")
        if not (np.all(np.diff(t) > 0) and t[0] > 0):
            raise ValidationError("table abscissae must be positive and strictly increasing")
        if np.any(np.diff(v) > 0):
            raise ValidationError("table values must be non-increasing in t")
        if np.any(v < 1):
            raise ValidationError("table values must be >= 1")
        if not math.isclose(t[-1], 1.0):
            raise ValidationError("table must extend to t = 1")
        if not math.isclose(v[-1], 1.0):
            raise ValidationError("table must have v(1) = 1")
        if v[0] <= 1:
            raise ValidationError("degenerate weight: v must be unbounded as t -> 0")
        object.__setattr__(self, "table_t", t)
        object.__setattr__(self, "table_v", v)
        # monotone log-log interpolant; left of the samples extrapolate with
        # the first segment's power law
        interp = PchipInterpolator(np.log(t), np.log(v), extrapolate=False)
        object.__setattr__(self, "_interp", interp)
        slope = (math.log(v[1]) - math.log(v[0])) / (math.log(t[1]) - math.log(t[0]))
        object.__setattr__(self, "_left_slope", slope)

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        scalar = t_arr.ndim == 0
        t_arr = np.atleast_1d(t_arr)
        if np.any(t_arr <= 0):
            raise ValidationError("weight evaluated at t <= 0")
        if self.family == "power":
            out = np.where(t_arr < 1.0, t_arr ** (-self.a), 1.0)
        elif self.family == "logpow":
            out = np.where(t_arr < 1.0, (1.0 - np.log(np.minimum(t_arr, 1.0))) ** self.b, 1.0)
        else:
            out = self._eval_table(t_arr)
        return float(out[0]) if scalar else out

    def _eval_table(self, t_arr):
        t0 = self.table_t[0]
        logt = np.log(np.clip(t_arr, None, 1.0))
        out = np.ones_like(t_arr)
        inside = (t_arr >= t0) & (t_arr < 1.0)
        out[inside] = np.exp(self._interp(logt[inside]))
        below = t_arr < t0
        logv0 = math.log(self.table_v[0])
        out[below] = np.exp(logv0 + self._left_slope * (logt[below] - math.log(t0)))
        return out

    def log2v_at_dyadic(self, alpha) -> np.ndarray:
        """log2 v(2^-alpha); stays finite where 2^-alpha itself underflows."""
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        if self.family == "power":
            return np.where(alpha > 0, self.a * alpha, 0.0)
        if self.family == "logpow":
            return np.where(alpha > 0, self.b * np.log2(1.0 + alpha * math.log(2.0)), 0.0)
        logt = -alpha * math.log(2.0)
        logt0 = math.log(self.table_t[0])
        out = np.zeros_like(logt)
        inside = (logt >= logt0) & (alpha > 0)
        out[inside] = self._interp(logt[inside]) / math.log(2.0)
        below = logt < logt0
        logv0 = math.log(self.table_v[0])
        out[below] = (logv0 + self._left_slope * (logt[below] - logt0)) / math.log(2.0)
        return out

    def descriptor(self) -> dict:
        if self.family == "power":
            return {"family": "power", "a": self.a}
        if self.family == "logpow":
            return {"family": "logpow", "b": self.b}
        return {
            "family": "table",
            "t": list(map(float, self.table_t)),
            "v": list(map(float, self.table_v)),
        }


def weight_from_descriptor(desc) -> Weight:
    """Build a weight from its JSON descriptor (dict or JSON string)."""
    if isinstance(desc, str):
        desc = json.loads(desc)
    family = desc.get("family")
    if family == "power":
        return Weight("power", a=float(desc["a"]))
    if family == "logpow":
        return Weight("logpow", b=float(desc["b"]))
    if family == "table":
        return Weight("table", table_t=np.asarray(desc["t"], float),
                      table_v=np.asarray(desc["v"], float))
    raise ValidationError(f"unknown weight family {family!r}")


def _quarter_dyadic_grid(grid_depth: int) -> np.ndarray:
    # t = 2^(-k/4), k = 0..4*grid_depth, decreasing from 1
    return 2.0 ** (-np.arange(4 * grid_depth + 1) / 4.0)


def doubling_constant(w: Weight, grid_depth: int = 20) -> float:
    """Max of v(t)/v(2t) over the quarter-dyadic test grid."""
    if grid_depth < 4:
        raise ValidationError("grid_depth must be >= 4")
    t = _quarter_dyadic_grid(grid_depth)
    ratios = w(t) / w(2.0 * t)
    return float(max(ratios.max(), 1.0))


def default_band_ratio(w: Weight, grid_depth: int = 20) -> float:
    """Default A = max(2, ceil(D^2) + 1): wide enough that every band
    [A^l, A^(l+1)) is hit by a dyadic scale."""
    d = doubling_constant(w, grid_depth)
    return float(max(2, math.ceil(d * d) + 1))


def scale_sequence(w: Weight, A: float, l_max: int) -> list[int]:
    """alpha_0 = 0 and alpha_l = smallest integer with v(2^-alpha) >= A^l.

    Verifies the band membership v(2^-alpha_l) in [A^l, A^(l+1)) and fails
    with the offending level if the weight jumps past a band.
    """
    if not A > 1:
        raise ValidationError("band ratio A must exceed 1")
    if l_max < 1:
        raise ValidationError("l_max must be >= 1")
    log2A = math.log2(A)
    alphas = [0]
    for l in range(1, l_max + 1):
        target = l * log2A          # need log2 v(2^-alpha) >= l*log2A
        lo = alphas[-1]             # log2v(lo) < target
        hi = max(lo + 1, 1)
        while w.log2v_at_dyadic(hi)[0] < target:
            lo = hi
            hi *= 2
            if hi > _ALPHA_SEARCH_CAP:
                raise ScaleBandError(l, f"no dyadic scale reaches band {l} below 2^-{_ALPHA_SEARCH_CAP}")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if w.log2v_at_dyadic(mid)[0] < target:
                lo = mid
            else:
                hi = mid
        alpha = hi
        log2v = w.log2v_at_dyadic(alpha)[0]
        if not (target <= log2v < (l + 1) * log2A):
            raise ScaleBandError(
                l, f"weight jumps past band {l}: v(2^-{alpha}) = 2^{log2v:.3f} "
                   f"not in [A^{l}, A^{l + 1})")
        alphas.append(alpha)
    return alphas


def _band_ratios_log2(w: Weight, alphas: Sequence[int], m: int) -> np.ndarray:
    """log2 of r_l = 2^(-m a_l) v(2^-a_l) / (2^(-m a_(l-1)) v(2^-a_(l-1)))."""
    alpha = np.asarray(alphas, dtype=float)
    log2v = w.log2v_at_dyadic(alpha)
    rho = -m * alpha + log2v
    return np.diff(rho)


def smoothness_exponent(w: Weight, alphas: Sequence[int], grid_depth: int = 20):
    """Smallest positive integer m making t^(m-1) v(t) non-decreasing.

    That monotonicity forces every band ratio r_l below 2^-(gap) <= 1/2, so
    the geometric-decay requirement holds with room; the returned gamma is
    the empirical max ratio over the computed levels, the certificate the
    rest of the pipeline quotes.
    """
    t = _quarter_dyadic_grid(grid_depth)
    logt = np.log(t)
    logv = np.log(w(t))
    for m in range(1, _M_CAP + 1):
        u = (m - 1) * logt + logv
        # t decreases along the grid, so u must be non-increasing
        if np.all(np.diff(u) <= 1e-12):
            gamma = float(2.0 ** _band_ratios_log2(w, alphas, m).max())
            if gamma < 1.0:
                return m, gamma
    raise ValidationError(
        f"no m <= {_M_CAP} makes t^(m-1) v(t) monotone; weight violates the "
        f"doubling-derived growth cap")


def power_type_gap(alphas: Sequence[int]) -> Optional[int]:
    """Max gap alpha_(l+1) - alpha_l when it has stabilized.

    Stabilized means the first and last halves of the computed gaps share
    the same max; growing gaps (non-power-type weights) return None.
    """
    gaps = np.diff(np.asarray(alphas, dtype=int))
    if gaps.size == 0:
        return None
    head = gaps[: (gaps.size + 1) // 2]
    tail = gaps[gaps.size // 2:]
    d = int(gaps.max())
    if head.max() == d and tail.max() == d:
        return d
    return None


@dataclass(frozen=True)
class ScalePlan:
    """Weight-adapted scale data consumed by every decomposition."""

    A: float
    alphas: tuple[int, ...]
    m: int
    gamma: float
    power_type_gap: Optional[int]

    def __post_init__(self):
        alphas = tuple(int(a) for a in self.alphas)
        if alphas[0] != 0 or any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise ValidationError("alphas must start at 0 and increase strictly")
        if not (self.A > 1 and self.m >= 1 and 0 < self.gamma < 1):
            raise ValidationError("plan parameters out of range")
        object.__setattr__(self, "alphas", alphas)

    @property
    def l_max(self) -> int:
        return len(self.alphas) - 1

    def block_of_level(self, j: int) -> int:
        """Index l of the block owning detail generation j (alpha_(l-1), alpha_l];
        levels past the last alpha belong to the trailing truncated block."""
        for l in range(1, len(self.alphas)):
            if j <= self.alphas[l]:
                return l if j > self.alphas[l - 1] else l - 1
        return self.l_max + (1 if j > self.alphas[-1] else 0)

    def to_json(self) -> dict:
        return {
            "A": self.A,
            "alphas": list(self.alphas),
            "m": self.m,
            "gamma": self.gamma,
            "d": self.power_type_gap,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "ScalePlan":
        return cls(A=float(payload["A"]), alphas=tuple(payload["alphas"]),
                   m=int(payload["m"]), gamma=float(payload["gamma"]),
                   power_type_gap=payload.get("d"))


def make_plan(w: Weight, A: Optional[float] = None, l_max: int = 8,
              grid_depth: int = 20) -> ScalePlan:
    """Assemble the full scale plan for a weight.

    A defaults to max(2, ceil(D^2) + 1); explicit overrides are accepted as
    long as every band is actually hit (checked by scale_sequence).
    """
    if A is None:
        A = default_band_ratio(w, grid_depth)
    alphas = scale_sequence(w, A, l_max)
    m, gamma = smoothness_exponent(w, alphas, grid_depth)
    return ScalePlan(A=float(A), alphas=tuple(alphas), m=m, gamma=gamma,
                     power_type_gap=power_type_gap(alphas))
