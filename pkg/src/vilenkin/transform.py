"""Vilenkin characters and the mixed-radix Vilenkin transform.

The characters of the truncated group are fully separable across digit
positions, so the transform factors into one small DFT stage per digit
(radix m_k, applied as a dense m_k x m_k matrix).  The forward transform
carries the Haar normalization 1/M_N so coefficients equal the integral
definition; the inverse is an unweighted character sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .group import GroupPoint, VilenkinBase, digit_table, digits_of, parse_base_spec


@dataclass(frozen=True)
class GridFunction1D:
    """Complex samples of a function on the depth-N grid, one per cell."""

    base: VilenkinBase
    depth: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.base.m_at(self.depth),):
            raise ValueError("values length must equal M_N")


@dataclass(frozen=True)
class GridFunction2D:
    """Samples on the depth-N grid of the product group, first coordinate major."""

    base: VilenkinBase
    depth: int
    values: np.ndarray

    def __post_init__(self):
        size = self.base.m_at(self.depth)
        if self.values.shape != (size, size):
            raise ValueError("values shape must equal M_N x M_N")


@dataclass(frozen=True)
class Spectrum1D:
    base: VilenkinBase
    depth: int
    coefficients: np.ndarray

    def __post_init__(self):
        if self.coefficients.shape != (self.base.m_at(self.depth),):
            raise ValueError("coefficient count must equal M_N")


@dataclass(frozen=True)
class Spectrum2D:
    base: VilenkinBase
    depth: int
    coefficients: np.ndarray

    def __post_init__(self):
        size = self.base.m_at(self.depth)
        if self.coefficients.shape != (size, size):
            raise ValueError("coefficient shape must equal M_N x M_N")


def grid1d(base: VilenkinBase, depth: int, values) -> GridFunction1D:
    return GridFunction1D(base, depth, np.asarray(values, dtype=np.complex128))


def grid2d(base: VilenkinBase, depth: int, values) -> GridFunction2D:
    return GridFunction2D(base, depth, np.asarray(values, dtype=np.complex128))


def character(n: int, x: GroupPoint) -> complex:
    """psi_n(x) = prod_k exp(2 pi i n_k x_k / m_k)."""
    size = x.base.m_at(x.depth)
    if not 0 <= n < size:
        raise ValueError(f"character index {n} out of range [0, {size})")
    exp = digits_of(n, x.base)
    phase = sum(
        nk * x.digits[k] / x.base.radix(k) for k, nk in enumerate(exp.digits)
    )
    return complex(np.exp(2j * np.pi * phase))


def character_values(n: int, base: VilenkinBase, depth: int) -> np.ndarray:
    """psi_n sampled on the whole depth-N grid."""
    gens = base.generators[:depth]
    dt = digit_table(gens)
    exp = digits_of(n, base)
    phase = np.zeros(base.m_at(depth))
    for k, nk in enumerate(exp.digits):
        if nk:
            phase += nk * dt[:, k] / gens[k]
    return np.exp(2j * np.pi * phase)


@lru_cache(maxsize=32)
def character_matrix(generators: tuple[int, ...]) -> np.ndarray:
    """Dense matrix W with W[n, x] = psi_n(x); the direct tensor of digit phases."""
    dt = digit_table(generators)
    phase = (dt / np.asarray(generators)) @ dt.T
    return np.exp(2j * np.pi * phase)


@lru_cache(maxsize=64)
def _stage_matrices(generators: tuple[int, ...]) -> tuple[np.ndarray, ...]:
    """Per-digit radix-m DFT stages F[n, x] = exp(-2 pi i n x / m)."""
    mats = []
    for g in generators:
        j = np.arange(g)
        mats.append(np.exp(-2j * np.pi * np.outer(j, j) / g))
    return tuple(mats)


def _apply_stages(values: np.ndarray, generators: tuple[int, ...], conjugate: bool) -> np.ndarray:
    """Apply one small DFT stage per digit axis; index order is preserved."""
    n = len(generators)
    a = values.reshape(tuple(reversed(generators)))
    for j, mat in enumerate(_stage_matrices(generators)):
        if conjugate:
            mat = mat.conj()
        axis = n - 1 - j  # digit j is the (n-1-j)-th reshaped axis
        a = np.moveaxis(np.tensordot(mat, a, axes=([1], [axis])), 0, axis)
    return a.reshape(-1)


def forward(f: GridFunction1D, mode: str = "fast") -> Spectrum1D:
    """Vilenkin-Fourier coefficients (1/M_N) sum_x f(x) conj(psi_i(x))."""
    gens = f.base.generators[: f.depth]
    size = f.base.m_at(f.depth)
    if mode == "naive":
        w = character_matrix(gens)
        coefs = w.conj() @ f.values / size
    elif mode == "fast":
        coefs = _apply_stages(f.values, gens, conjugate=False) / size
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Spectrum1D(f.base, f.depth, coefs)


def inverse(s: Spectrum1D, mode: str = "fast") -> GridFunction1D:
    """Synthesis f(x) = sum_i coef_i psi_i(x)."""
    gens = s.base.generators[: s.depth]
    if mode == "naive":
        w = character_matrix(gens)
        vals = w.T @ s.coefficients
    elif mode == "fast":
        vals = _apply_stages(s.coefficients, gens, conjugate=True)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return GridFunction1D(s.base, s.depth, vals)


def forward2d(f: GridFunction2D, mode: str = "fast") -> Spectrum2D:
    """Coefficient (i, j) = (1/M_N^2) sum_{x,y} f(x,y) conj(psi_i(x) psi_j(y))."""
    gens = f.base.generators[: f.depth]
    size = f.base.m_at(f.depth)
    if mode == "naive":
        w = character_matrix(gens).conj()
        coefs = w @ f.values @ w.T / size**2
    elif mode == "fast":
        a = np.stack([_apply_stages(col, gens, conjugate=False) for col in f.values.T], axis=1)
        coefs = np.stack([_apply_stages(row, gens, conjugate=False) for row in a], axis=0)
        coefs /= size**2
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Spectrum2D(f.base, f.depth, coefs)


def inverse2d(s: Spectrum2D, mode: str = "fast") -> GridFunction2D:
    gens = s.base.generators[: s.depth]
    if mode == "naive":
        w = character_matrix(gens)
        vals = w.T @ s.coefficients @ w
    elif mode == "fast":
        a = np.stack([_apply_stages(col, gens, conjugate=True) for col in s.coefficients.T], axis=1)
        vals = np.stack([_apply_stages(row, gens, conjugate=True) for row in a], axis=0)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return GridFunction2D(s.base, s.depth, vals)


def transform2d(obj, direction: str = "forward", mode: str = "fast"):
    """Dispatch helper: forward for grids, inverse for spectra."""
    if direction == "forward":
        return forward2d(obj, mode)
    if direction == "inverse":
        return inverse2d(obj, mode)
    raise ValueError(f"unknown direction {direction!r}")


def refine1d(f: GridFunction1D, depth: int) -> GridFunction1D:
    """Re-sample a grid function at a finer depth (constant on old cells)."""
    if depth < f.depth:
        raise ValueError("refine target must be at least the current depth")
    reps = f.base.m_at(depth) // f.base.m_at(f.depth)
    # index layout: finer digits are more significant, so each old cell
    # x + k*M_old (k < reps) carries the old value at x
    vals = np.tile(f.values, reps)
    return GridFunction1D(f.base, depth, vals)


def refine2d(f: GridFunction2D, depth: int) -> GridFunction2D:
    if depth < f.depth:
        raise ValueError("refine target must be at least the current depth")
    reps = f.base.m_at(depth) // f.base.m_at(f.depth)
    vals = np.tile(f.values, (reps, reps))
    return GridFunction2D(f.base, depth, vals)


# ---------------------------------------------------------------------------
# grid/spectrum text format

_HEADER = "vilenkin-grid v1; base={base}; depth={depth}; dims={dims}"


def save_grid(path, obj) -> None:
    """Write a grid or spectrum in the line-oriented text format."""
    if isinstance(obj, (GridFunction1D, Spectrum1D)):
        dims, values = 1, np.asarray(_values_of(obj)).ravel()
    elif isinstance(obj, (GridFunction2D, Spectrum2D)):
        dims, values = 2, np.asarray(_values_of(obj)).ravel()
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    base_spec = obj.base.spec or ",".join(str(g) for g in obj.base.generators)
    lines = [_HEADER.format(base=base_spec, depth=obj.depth, dims=dims)]
    for v in values:
        lines.append(f"{v.real:.17g},{v.imag:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _values_of(obj):
    return obj.values if hasattr(obj, "values") else obj.coefficients


def load_grid(path):
    """Read the text format back; returns a GridFunction1D or GridFunction2D."""
    with open(path) as fh:
        header = fh.readline().strip()
        fields = dict(
            part.split("=", 1) for part in header.split(";")[1:] for part in [part.strip()]
        )
        base = parse_base_spec(fields["base"])
        depth = int(fields["depth"])
        dims = int(fields["dims"])
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    values = data[:, 0] + 1j * data[:, 1]
    size = base.m_at(depth)
    if dims == 1:
        if len(values) != size:
            raise ValueError(f"expected {size} samples, found {len(values)}")
        return GridFunction1D(base, depth, values)
    if len(values) != size * size:
        raise ValueError(f"expected {size * size} samples, found {len(values)}")
    return GridFunction2D(base, depth, values.reshape(size, size))
