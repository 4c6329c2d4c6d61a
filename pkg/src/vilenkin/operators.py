"""Rectangular partial sums, conditional expectations, maximal operators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .group import VilenkinBase, sub_index_table
from .kernels import dirichlet
from .transform import (
    GridFunction2D,
    Spectrum2D,
    character_matrix,
    forward2d,
    inverse2d,
)


@dataclass(frozen=True)
class ConeParams:
    """Aperture of the index cone 2^-alpha <= k/l <= 2^alpha."""

    alpha: float

    def in_cone(self, k: int, l: int) -> bool:
        if k < 1 or l < 1:
            return False
        ratio = k / l
        return 2.0**-self.alpha <= ratio <= 2.0**self.alpha

    def pairs(self, k_max: int, l_max: int):
        """All cone index pairs with 1 <= k <= k_max, 1 <= l <= l_max."""
        for k in range(1, k_max + 1):
            lo = max(1, int(np.ceil(k * 2.0**-self.alpha)))
            hi = min(l_max, int(np.floor(k * 2.0**self.alpha)))
            for l in range(lo, hi + 1):
                if self.in_cone(k, l):
                    yield k, l


def partial_sum2d(f: GridFunction2D, m: int, n: int, method: str = "spectral") -> GridFunction2D:
    """Rectangular partial sum S_{m,n} f; S with a zero index is the zero grid."""
    size = f.base.m_at(f.depth)
    if not (0 <= m <= size and 0 <= n <= size):
        raise ValueError(f"partial-sum indices ({m}, {n}) out of range [0, {size}]")
    if m == 0 or n == 0:
        return GridFunction2D(f.base, f.depth, np.zeros_like(f.values))
    if method == "spectral":
        spec = forward2d(f).coefficients.copy()
        spec[m:, :] = 0.0
        spec[:, n:] = 0.0
        return inverse2d(Spectrum2D(f.base, f.depth, spec))
    if method == "convolution":
        sub = sub_index_table(f.base, f.depth)
        dm = dirichlet(m, f.base, f.depth).values[sub]
        dn = dirichlet(n, f.base, f.depth).values[sub]
        vals = dm @ f.values @ dn.T / size**2
        return GridFunction2D(f.base, f.depth, vals)
    raise ValueError(f"unknown method {method!r}")


def cond_expectation(f: GridFunction2D, n: int) -> GridFunction2D:
    """Block average over I_n(x) x I_n(y) cells; equals S_{M_n,M_n} f."""
    if n > f.depth:
        raise ValueError(f"filtration level {n} exceeds grid depth {f.depth}")
    size = f.base.m_at(f.depth)
    cells = f.base.m_at(n)
    block = size // cells
    # index layout: coarse digits are the low ones, so cell c owns indices
    # {c + k*cells : k < block}
    v = f.values.reshape(block, cells, block, cells)
    means = v.mean(axis=(0, 2))
    out = np.broadcast_to(means[None, :, None, :], (block, cells, block, cells)).reshape(
        size, size
    )
    return GridFunction2D(f.base, f.depth, np.ascontiguousarray(out))


def dyadic_maximal(f: GridFunction2D) -> GridFunction2D:
    """Pointwise max over n = 0..N of |S_{M_n,M_n} f| (martingale maximal function)."""
    best = np.abs(f.values).astype(np.float64)
    for n in range(f.depth):
        best = np.maximum(best, np.abs(cond_expectation(f, n).values))
    return GridFunction2D(f.base, f.depth, best.astype(np.complex128))


def partial_sum_table(f: GridFunction2D) -> np.ndarray:
    """S_{m,n} f for every 1 <= m, n <= M_N as a (M, M, M, M) array.

    Entry [m-1, n-1] is the grid of S_{m,n} f.  Memory grows as M^4, so this
    is for desk-scale grids (M <= ~40); use partial_sum2d for single sums.
    """
    size = f.base.m_at(f.depth)
    u = character_matrix(f.base.generators[: f.depth])  # u[i, x] = psi_i(x)
    c = forward2d(f).coefficients
    a = np.einsum("ij,ix->ixj", c, u)
    b = np.cumsum(a, axis=0)  # b[m-1, x, j] = sum_{i<m} c[i,j] psi_i(x)
    return np.cumsum(np.einsum("mxj,jy->mjxy", b, u), axis=1)


def weighted_maximal(
    f: GridFunction2D,
    p: float,
    m_max: int | None = None,
    n_max: int | None = None,
    plus_one: bool = False,
) -> GridFunction2D:
    """sup over (m,n) of |S_{m,n} f| / (m+n)^(2/p-2), evaluated as a finite max.

    Partial sums stabilize once both indices reach M_N, so the default cap
    m_max = n_max = M_N realizes the supremum for depth-N data.  The
    ``plus_one`` flag switches the divisor to (m+n+1)^(2/p-2).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"exponent p = {p} outside (0, 1)")
    size = f.base.m_at(f.depth)
    m_max = size if m_max is None else m_max
    n_max = size if n_max is None else n_max
    if m_max > size or n_max > size:
        raise ValueError("index caps exceed M_N")
    u = character_matrix(f.base.generators[: f.depth])
    c = forward2d(f).coefficients
    shift = 1 if plus_one else 0
    best = np.zeros((size, size))
    g = np.zeros((size, size), dtype=np.complex128)  # g[x, j] = sum_{i<m} c[i,j] psi_i(x)
    n_idx = np.arange(1, n_max + 1)
    for m in range(1, m_max + 1):
        g = g + np.outer(u[m - 1], c[m - 1])
        s_all = np.cumsum(np.einsum("xj,jy->jxy", g[:, :n_max], u[:n_max]), axis=0)
        weights = ((m + n_idx + shift) ** (2.0 / p - 2.0))[:, None, None]
        best = np.maximum(best, np.max(np.abs(s_all) / weights, axis=0))
    return GridFunction2D(f.base, f.depth, best.astype(np.complex128))
