"""L_p quasi-norms, weak-L_p, the diagonal-filtration Hardy norm, and the
atomic upper bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import cond_expectation, dyadic_maximal
from .transform import GridFunction2D


@dataclass(frozen=True)
class NormValue:
    value: float
    p: float
    kind: str  # "Lp", "weakLp", "Hardy", "HardyUpper"

    def __float__(self) -> float:
        return self.value


def lp_quasinorm(f: GridFunction2D, p: float) -> NormValue:
    """((1/M_N^2) sum |f|^p)^(1/p) -- a quasi-norm for p < 1."""
    if p <= 0:
        raise ValueError(f"exponent p = {p} must be positive")
    mean = np.mean(np.abs(f.values) ** p)
    return NormValue(float(mean ** (1.0 / p)), p, "Lp")


def weak_lp_norm(f: GridFunction2D, p: float) -> NormValue:
    """sup_{lambda>0} lambda * mu(|f| > lambda)^(1/p), exact on the grid.

    With |f| sorted descending as v_1 >= v_2 >= ..., the sup over lambda
    rising to each distinct value is max_j v_j (j / M_N^2)^(1/p).
    """
    if p <= 0:
        raise ValueError(f"exponent p = {p} must be positive")
    v = np.sort(np.abs(f.values).ravel())[::-1]
    j = np.arange(1, v.size + 1)
    return NormValue(float(np.max(v * (j / v.size) ** (1.0 / p))), p, "weakLp")


def hardy_square_norm(f: GridFunction2D, p: float) -> NormValue:
    """L_p quasi-norm of the dyadic maximal function sup_n |S_{M_n,M_n} f|.

    Exact for data whose content lives at scales <= the grid depth: deeper
    conditional expectations reproduce f unchanged.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"exponent p = {p} outside (0, 1]")
    val = lp_quasinorm(dyadic_maximal(f), p).value
    return NormValue(val, p, "Hardy")


def hardy_upper_from_atoms(decomposition, p: float) -> NormValue:
    """(sum_k |lambda_k|^p)^(1/p): the atomic upper bound, up to the
    equivalence constant (which is reported elsewhere, never assumed 1)."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"exponent p = {p} outside (0, 1]")
    lams = np.array([lam for lam, _ in decomposition.terms], dtype=float)
    val = float(np.sum(np.abs(lams) ** p) ** (1.0 / p)) if lams.size else 0.0
    return NormValue(val, p, "HardyUpper")


def modulus_of_continuity(f, k: int, p: float) -> NormValue:
    """omega(1/M_k, f) = Hardy norm of f - S_{M_k,M_k} f.

    Accepts either a grid function or an atomic decomposition (which is
    materialized at its finest representable depth first).
    """
    grid = f if isinstance(f, GridFunction2D) else f.compose_finest()
    if k > grid.depth:
        raise ValueError(f"scale index {k} exceeds grid depth {grid.depth}")
    tail = GridFunction2D(
        grid.base, grid.depth, grid.values - cond_expectation(grid, k).values
    )
    val = hardy_square_norm(tail, p).value
    return NormValue(val, p, "Hardy")
