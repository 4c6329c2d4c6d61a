"""Dirichlet kernels and the kernel-integral estimates behind them.

``dirichlet`` evaluates D_n = sum_{i<n} psi_i either by direct summation or
through the closed product form built from the block kernels D_{M_j}.  The
integral quantities are exact Riemann sums on the truncated grid, reported
together with the scale of the bound they are checked against.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .group import (
    GroupPoint,
    VilenkinBase,
    digit_table,
    digits_of,
    sub_indices,
)
from .transform import GridFunction1D, character_values

_CACHE_LOCK = threading.Lock()
_KERNEL_CACHE: dict[tuple, np.ndarray] = {}


def block_kernel(n: int, base: VilenkinBase, depth: int) -> np.ndarray:
    """D_{M_n}: equals M_n on the cylinder I_n and 0 elsewhere."""
    gens = base.generators[:depth]
    dt = digit_table(gens)
    mask = np.all(dt[:, :n] == 0, axis=1) if n > 0 else np.ones(len(dt), dtype=bool)
    return np.where(mask, float(base.m_at(n)), 0.0).astype(np.complex128)


def dirichlet(
    n: int, base: VilenkinBase, depth: int, method: str = "direct"
) -> GridFunction1D:
    """The n-th Dirichlet kernel on the depth-N grid, n <= M_N."""
    size = base.m_at(depth)
    if not 0 <= n <= size:
        raise ValueError(f"kernel order {n} out of range [0, {size}]")
    if method == "direct":
        vals = _dirichlet_direct(n, base, depth)
    elif method == "closed":
        vals = _dirichlet_closed(n, base, depth)
    else:
        raise ValueError(f"unknown method {method!r}")
    return GridFunction1D(base, depth, vals)


def _dirichlet_direct(n: int, base: VilenkinBase, depth: int) -> np.ndarray:
    vals = np.zeros(base.m_at(depth), dtype=np.complex128)
    for i in range(n):
        vals += character_values(i, base, depth)
    return vals


def _dirichlet_closed(n: int, base: VilenkinBase, depth: int) -> np.ndarray:
    size = base.m_at(depth)
    if n == 0:
        return np.zeros(size, dtype=np.complex128)
    if n == size:
        return block_kernel(depth, base, depth)
    gens = base.generators[:depth]
    dt = digit_table(gens)
    exp = digits_of(n, base)
    acc = np.zeros(size, dtype=np.complex128)
    for j, nj in enumerate(exp.digits):
        if nj == 0:
            continue
        m_j = gens[j]
        rj = np.exp(2j * np.pi * dt[:, j] / m_j)
        inner = np.zeros(size, dtype=np.complex128)
        for u in range(m_j - nj, m_j):
            inner += rj**u
        acc += block_kernel(j, base, depth) * inner
    return character_values(n, base, depth) * acc


def dirichlet_table(base: VilenkinBase, depth: int, upto: int) -> np.ndarray:
    """Rows 0..upto of D_n by cumulative direct summation; row n is D_n."""
    size = base.m_at(depth)
    out = np.zeros((upto + 1, size), dtype=np.complex128)
    acc = np.zeros(size, dtype=np.complex128)
    for n in range(1, upto + 1):
        acc = acc + character_values(n - 1, base, depth)
        out[n] = acc
    return out


def dirichlet_block(s: int, n: int, base: VilenkinBase, depth: int) -> GridFunction1D:
    """D_{s*M_n} via the block identity D_{sM_n} = D_{M_n} sum_{k<s} r_n^k."""
    if not 1 <= s <= base.radix(n):
        raise ValueError(f"block multiplier s = {s} out of range [1, m_n]")
    if s * base.m_at(n) > base.m_at(depth):
        raise ValueError("s*M_n exceeds the grid size")
    gens = base.generators[:depth]
    dt = digit_table(gens)
    rn = np.exp(2j * np.pi * dt[:, n] / gens[n])
    geom = np.zeros(base.m_at(depth), dtype=np.complex128)
    for k in range(s):
        geom += rn**k
    return GridFunction1D(base, depth, block_kernel(n, base, depth) * geom)


def _abs_kernel(n: int, base: VilenkinBase, depth: int) -> np.ndarray:
    """|D_n| at full grid depth, cached per (base, n).

    Concurrent duplicate computation is harmless: values are deterministic,
    the winning write is identical to any loser's.
    """
    key = (base.generators[:depth], n)
    with _CACHE_LOCK:
        hit = _KERNEL_CACHE.get(key)
    if hit is not None:
        return hit
    vals = np.abs(_dirichlet_direct(n, base, depth))
    with _CACHE_LOCK:
        _KERNEL_CACHE.setdefault(key, vals)
    return vals


def kernel_integral_1d(n: int, x: GroupPoint, cell_depth: int) -> float:
    """Exact Riemann sum of |D_n(x - t)| over t in the cylinder I_{cell_depth}."""
    base, depth = x.base, x.depth
    if cell_depth > depth:
        raise ValueError("cell depth exceeds point depth")
    size = base.m_at(depth)
    abs_d = _abs_kernel(n, base, depth)
    t_idx = base.m_at(cell_depth) * np.arange(size // base.m_at(cell_depth))
    xt = sub_indices(x.index, t_idx, base, depth)
    return float(abs_d[xt].sum() / size)


def kernel_integral_2d(
    m: int, n: int, x: GroupPoint, y: GroupPoint, cell_depth: int
) -> float:
    """The product-cylinder integral; the integrand separates into 1-D factors."""
    return kernel_integral_1d(m, x, cell_depth) * kernel_integral_1d(n, y, cell_depth)


def kernel_integral_2d_oracle(
    m: int, n: int, x: GroupPoint, y: GroupPoint, cell_depth: int
) -> float:
    """Full double Riemann sum over I_N x I_N, no separation shortcut."""
    base, depth = x.base, x.depth
    size = base.m_at(depth)
    dm = _abs_kernel(m, base, depth)
    dn = _abs_kernel(n, base, depth)
    t_idx = base.m_at(cell_depth) * np.arange(size // base.m_at(cell_depth))
    xt = dm[sub_indices(x.index, t_idx, base, depth)]
    ys = dn[sub_indices(y.index, t_idx, base, depth)]
    return float(np.add.reduce(np.outer(xt, ys), axis=None) / size**2)


@dataclass(frozen=True)
class KernelEstimateReport:
    """One sampled point of a kernel-integral estimate check."""

    region_class: str  # "IN-shell", "shell-IN" or "shell-shell"
    s1: int  # shell of x (cell_depth means x in I_N)
    s2: int  # shell of y
    m: int
    n: int
    cell_depth: int
    eps: float
    lhs: float
    rhs_scale: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs_scale


def _shell_point(base: VilenkinBase, depth: int, s: int, rng) -> GroupPoint:
    """A pseudo-random point of I_s \\ I_{s+1} (first nonzero digit at s)."""
    from .group import point_of

    lead = int(rng.integers(1, base.radix(s)))
    tail_span = base.m_at(depth) // base.m_at(s + 1)
    tail = int(rng.integers(0, tail_span))
    return point_of(lead * base.m_at(s) + tail * base.m_at(s + 1), base, depth)


def _cell_point(base: VilenkinBase, depth: int, cell_depth: int, rng) -> GroupPoint:
    from .group import point_of

    span = base.m_at(depth) // base.m_at(cell_depth)
    return point_of(base.m_at(cell_depth) * int(rng.integers(0, span)), base, depth)


def lemma1_sweep(
    base: VilenkinBase,
    cell_depth: int,
    eps_list,
    samples_per_region: int = 4,
    seed: int = 0,
) -> list[KernelEstimateReport]:
    """Sample all three region classes and report integral/bound-scale ratios.

    Sampling is deterministic in the seed.  Region classes:

    * ``IN-shell``   x in I_N, y in I_s \\ I_{s+1}; scale m^eps M_s / M_N^(1+eps)
    * ``shell-IN``   the mirror image; scale n^eps M_s / M_N^(1+eps)
    * ``shell-shell`` both coordinates in shells; scale M_{s1} M_{s2} / M_N^2
    """
    depth = base.depth
    if cell_depth > depth - 1:
        raise ValueError("cell depth must leave at least one free digit")
    eps_list = list(eps_list)
    if not eps_list:
        raise ValueError("empty epsilon list: nothing to sweep")
    rng = np.random.default_rng(seed)
    m_n = base.m_at(cell_depth)
    size = base.m_at(depth)
    reports = []
    for eps in eps_list:
        for s in range(cell_depth):
            for _ in range(samples_per_region):
                m = int(rng.integers(1, size + 1))
                n = int(rng.integers(1, size + 1))
                x = _cell_point(base, depth, cell_depth, rng)
                y = _shell_point(base, depth, s, rng)
                lhs = kernel_integral_2d(m, n, x, y, cell_depth)
                scale = m**eps * base.m_at(s) / m_n ** (1 + eps)
                reports.append(
                    KernelEstimateReport("IN-shell", cell_depth, s, m, n, cell_depth, eps, lhs, scale)
                )
                m = int(rng.integers(1, size + 1))
                n = int(rng.integers(1, size + 1))
                x = _shell_point(base, depth, s, rng)
                y = _cell_point(base, depth, cell_depth, rng)
                lhs = kernel_integral_2d(m, n, x, y, cell_depth)
                scale = n**eps * base.m_at(s) / m_n ** (1 + eps)
                reports.append(
                    KernelEstimateReport("shell-IN", s, cell_depth, m, n, cell_depth, eps, lhs, scale)
                )
        for s1 in range(cell_depth):
            for s2 in range(cell_depth):
                for _ in range(samples_per_region):
                    m = int(rng.integers(1, size + 1))
                    n = int(rng.integers(1, size + 1))
                    x = _shell_point(base, depth, s1, rng)
                    y = _shell_point(base, depth, s2, rng)
                    lhs = kernel_integral_2d(m, n, x, y, cell_depth)
                    scale = base.m_at(s1) * base.m_at(s2) / m_n**2
                    reports.append(
                        KernelEstimateReport("shell-shell", s1, s2, m, n, cell_depth, eps, lhs, scale)
                    )
    return reports


def max_ratios_by_region(reports) -> dict[str, float]:
    out: dict[str, float] = {}
    for r in reports:
        out[r.region_class] = max(out.get(r.region_class, 0.0), r.ratio)
    return out
