"""Compactly supported orthonormal wavelet bases on the unit torus.

The basis is tabulated on a dyadic grid by iterating the two-scale
refinement to its fixed point; transforms of sampled data use the
periodized fast wavelet transform, which is an exact orthogonal map at
every level (the mod-2^j circular filter bank), so Parseval identities and
round trips hold to machine precision independent of the tables.

Coefficients are scaled by 1/sqrt(N) so they approximate the continuum
integrals against the L2-normalized periodized basis functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import CascadeError, ValidationError
from .filters import holder_exponent, scaling_filter, wavelet_filter
from .grid import GridFunction
from .weights import ScalePlan

__all__ = [
    "WaveletBasis",
    "CoeffTree",
    "build_basis",
    "required_order",
    "analyze",
    "synthesize",
    "partial_sum",
    "block_decompose",
    "unit_coefficient_tree",
]

_CASCADE_TOL = 1e-12
_CASCADE_MAX_ITER = 60
_ORDER_RULE_SLOPE = 0.55


@dataclass(frozen=True)
class WaveletBasis:
    """Order-p basis: filters plus dyadic tables of the scaling function phi
    and the wavelet psi on their common support [0, 2p-1]."""

    order: int
    scaling_filter: np.ndarray
    wavelet_filter_: np.ndarray
    phi_table: np.ndarray
    psi_table: np.ndarray
    tab_depth: int
    j0: int
    r_eff: float
    cascade_iterations: int
    cascade_residual: float

    @property
    def support_length(self) -> int:
        return 2 * self.order - 1

    def table_nodes(self) -> np.ndarray:
        return np.arange(self.phi_table.size) / (1 << self.tab_depth)

    def phi_at(self, x) -> np.ndarray:
        """Table lookup of phi (linear interp between dyadic nodes)."""
        x = np.asarray(x, dtype=float)
        return np.interp(x, self.table_nodes(), self.phi_table, left=0.0, right=0.0)

    def psi_at(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.interp(x, self.table_nodes(), self.psi_table, left=0.0, right=0.0)

    def periodized(self, which: str, j: int, k: int, M: int) -> GridFunction:
        """Sample the L2-normalized periodized phi_{jk} or psi_{jk} on an
        M-point torus grid from the tables."""
        fn = self.phi_at if which == "phi" else self.psi_at
        x = np.arange(M) / M
        out = np.zeros(M)
        # supp is [k 2^-j, (k + 2p - 1) 2^-j]; wrap as many times as needed
        wraps = int(math.ceil(self.support_length * 2.0 ** (-j))) + 1
        for n in range(-wraps, wraps + 1):
            out += fn((2.0**j) * (x + n) - k)
        return GridFunction(out * 2.0 ** (j / 2.0))


def _refine_step(table: np.ndarray, h: np.ndarray, tab_depth: int) -> np.ndarray:
    """(S f)(x) = sqrt(2) sum_k h_k f(2x - k) evaluated on the dyadic grid."""
    n = table.size
    step = 1 << tab_depth
    out = np.zeros_like(table)
    idx = np.arange(n)
    for k, hk in enumerate(h):
        src = 2 * idx - k * step
        valid = (src >= 0) & (src < n)
        out[valid] += math.sqrt(2.0) * hk * table[src[valid]]
    return out


def build_basis(order: int, tab_depth: int = 12, j0: int = 3) -> WaveletBasis:
    """Tabulate the order-p basis by cascade iteration to a fixed point."""
    if order < 1:
        raise ValidationError("order must be >= 1")
    if tab_depth < 8:
        raise ValidationError("tab_depth must be >= 8")
    if j0 < 0:
        raise ValidationError("j0 must be >= 0")
    h = scaling_filter(order)
    g = wavelet_filter(h)
    support = 2 * order - 1
    n = support * (1 << tab_depth) + 1
    nodes = np.arange(n) / (1 << tab_depth)
    if order == 1:
        phi = (nodes < 1).astype(float)               # box is the fixed point
    else:
        # hat start: partition of unity and exact zeros at the support ends,
        # so the spurious endpoint mode of the box start is never excited
        phi = np.maximum(0.0, 1.0 - np.abs(nodes - 1.0))
    residual = math.inf
    iterations = 0
    for iterations in range(1, _CASCADE_MAX_ITER + 1):
        new = _refine_step(phi, h, tab_depth)
        residual = float(np.abs(new - phi).max())
        phi = new
        if residual <= _CASCADE_TOL:
            break
    if residual > 1e-9:
        raise CascadeError(
            f"cascade for order {order} did not reach a fixed point "
            f"(residual {residual:.2e} after {iterations} iterations)")
    psi = _refine_step(phi, g, tab_depth)
    phi.setflags(write=False)
    psi.setflags(write=False)
    return WaveletBasis(
        order=order, scaling_filter=h, wavelet_filter_=g,
        phi_table=phi, psi_table=psi, tab_depth=tab_depth, j0=j0,
        r_eff=holder_exponent(order),
        cascade_iterations=iterations, cascade_residual=residual)


def required_order(plan: ScalePlan) -> int:
    """Smallest tabulated order whose regularity accounting exceeds m + 2
    (dimension 1 plus one of safety), via the 0.55-per-order rule."""
    order = math.ceil((plan.m + 2) / _ORDER_RULE_SLOPE)
    from .filters import MAX_ORDER
    if order > MAX_ORDER:
        raise ValidationError(
            f"smoothness exponent m={plan.m} needs order {order} > {MAX_ORDER}; "
            f"weight grows too fast for the tabulated family")
    return order


@dataclass
class CoeffTree:
    """Periodized wavelet coefficients: scaling block b at level j0 and
    detail rows c[j] (length 2^j) for j0 <= j < J."""

    j0: int
    J: int
    b: np.ndarray
    c: dict[int, np.ndarray] = field(default_factory=dict)

    def copy(self) -> "CoeffTree":
        return CoeffTree(self.j0, self.J, self.b.copy(),
                         {j: row.copy() for j, row in self.c.items()})

    def energy(self) -> float:
        return float(np.dot(self.b, self.b)
                     + sum(np.dot(r, r) for r in self.c.values()))

    def to_json(self) -> dict:
        return {"j0": self.j0, "J": self.J, "b": self.b.tolist(),
                "c": {str(j): row.tolist() for j, row in self.c.items()}}

    @classmethod
    def from_json(cls, payload: dict) -> "CoeffTree":
        return cls(int(payload["j0"]), int(payload["J"]),
                   np.asarray(payload["b"], float),
                   {int(j): np.asarray(row, float) for j, row in payload["c"].items()})


def _analysis_step(a: np.ndarray, h: np.ndarray, g: np.ndarray):
    """One periodized filter-bank split; a has even length 2^j."""
    L = h.size
    ext = np.resize(a, a.size + L - 1)                  # cyclic tiling
    windows = sliding_window_view(ext, L)[::2]          # rows a[(2k+m) mod n]
    return windows @ h, windows @ g


def _upsample_cconv(x: np.ndarray, filt: np.ndarray) -> np.ndarray:
    """Zero-upsample x and circularly convolve with filt."""
    n = 2 * x.size
    L = filt.size
    up = np.zeros(n)
    up[::2] = x
    if L == 1:
        return up * filt[0]
    windows = sliding_window_view(np.resize(up, n + L - 1), L)
    return np.roll(windows @ filt[::-1].copy(), L - 1)


def _synthesis_step(approx: np.ndarray, detail: np.ndarray,
                    h: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Adjoint of the split: rebuild length-2^j data from the halves."""
    return _upsample_cconv(approx, h) + _upsample_cconv(detail, g)


def analyze(f: GridFunction, basis: WaveletBasis, j0: Optional[int] = None,
            keep_scaling: bool = False):
    """Periodized orthonormal fast wavelet transform of the samples.

    Coefficients carry the 1/sqrt(N) scaling so they approximate the
    continuum pairings.  With keep_scaling=True also returns the scaling
    rows at every intermediate level (exact discrete analogues of the
    L2-normalized scaling coefficients).
    """
    j0 = basis.j0 if j0 is None else j0
    if not 0 <= j0 < f.J:
        raise ValidationError(f"coarse level {j0} must satisfy 0 <= j0 < J={f.J}")
    h = basis.scaling_filter
    g = basis.wavelet_filter_
    a = f.samples / math.sqrt(f.n)
    details: dict[int, np.ndarray] = {}
    scaling_rows = {f.J: a.copy()} if keep_scaling else None
    for j in range(f.J, j0, -1):
        a, d = _analysis_step(a, h, g)
        details[j - 1] = d
        if keep_scaling:
            scaling_rows[j - 1] = a.copy()
    tree = CoeffTree(j0=j0, J=f.J, b=a, c=details)
    if keep_scaling:
        return tree, scaling_rows
    return tree


def synthesize(tree: CoeffTree, basis: WaveletBasis) -> GridFunction:
    """Exact inverse of analyze."""
    h = basis.scaling_filter
    g = basis.wavelet_filter_
    a = tree.b
    for j in range(tree.j0, tree.J):
        d = tree.c.get(j)
        if d is None:
            d = np.zeros(a.size)
        a = _synthesis_step(a, d, h, g)
    return GridFunction(a * math.sqrt(1 << tree.J))


def partial_sum(tree: CoeffTree, N_level: int, basis: WaveletBasis) -> GridFunction:
    """s_N: scaling block plus detail generations j0..N synthesized to the grid."""
    if not tree.j0 <= N_level < tree.J:
        raise ValidationError(
            f"partial-sum level {N_level} outside [{tree.j0}, {tree.J - 1}]")
    clipped = CoeffTree(tree.j0, tree.J, tree.b,
                        {j: row for j, row in tree.c.items() if j <= N_level})
    return synthesize(clipped, basis)


def block_decompose(tree: CoeffTree, plan: ScalePlan, basis: WaveletBasis) -> list[GridFunction]:
    """Weight-adapted blocks g_l.

    Block 0 carries the scaling part (plus any detail generations at or
    below alpha_0); block l carries generations (alpha_(l-1), alpha_l].
    Generations past the last alpha go to one trailing truncated block, so
    the blocks always add back to the full function.
    """
    if plan.alphas[-1] >= tree.J and plan.alphas[0] >= tree.J:
        raise ValidationError("plan is deeper than the grid resolution")
    levels = sorted(tree.c.keys())
    owner = {j: plan.block_of_level(j) for j in levels}
    n_blocks = max([0] + list(owner.values())) + 1
    blocks = []
    for l in range(n_blocks):
        rows = {j: tree.c[j] for j in levels if owner[j] == l}
        if l == 0:
            sub = CoeffTree(tree.j0, tree.J, tree.b, rows)
        else:
            if not rows:
                blocks.append(GridFunction(np.zeros(1 << tree.J)))
                continue
            sub = CoeffTree(tree.j0, tree.J, np.zeros_like(tree.b), rows)
        blocks.append(synthesize(sub, basis))
    return blocks


def unit_coefficient_tree(J: int, j: int, k: int, basis: WaveletBasis,
                          j0: int = 0) -> CoeffTree:
    """Tree holding a single unit detail coefficient at (j, k)."""
    if not j0 <= j < J:
        raise ValidationError("detail level outside the tree")
    tree = CoeffTree(j0, J, np.zeros(1 << j0))
    row = np.zeros(1 << j)
    row[k] = 1.0
    tree.c[j] = row
    return tree
