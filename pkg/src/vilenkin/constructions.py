"""p-atoms, atomic decompositions, and the sharpness martingale families."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .group import VilenkinBase, parse_base_spec
from .kernels import block_kernel
from .operators import cond_expectation
from .transform import GridFunction2D, refine2d


@dataclass(frozen=True)
class Atom:
    """Candidate p-atom supported on the origin cube I_{N_a} x I_{N_a}."""

    grid: GridFunction2D
    support_depth: int
    p: float
    quasi_constant: float  # slack C on the sup bound max|a| <= C * M_{N_a}^(2/p)


@dataclass(frozen=True)
class AtomValidation:
    support_ok: bool
    mean_ok: bool
    sup_constant: float  # smallest C making the sup bound hold
    degenerate: bool  # identically zero
    support_excess: float
    mean_excess: float

    @property
    def ok(self) -> bool:
        return self.support_ok and self.mean_ok


@dataclass
class AtomicDecomposition:
    """Finite list of (lambda_k, atom_k) pairs composing a martingale."""

    base: VilenkinBase
    p: float
    terms: list[tuple[float, Atom]]
    family: str = "custom"
    # square coefficient blocks (lo, hi, weight): spectrum == weight on
    # [lo, hi) x [lo, hi), known analytically for the built-in families
    blocks: list[tuple[int, int, float]] | None = None
    meta: dict = field(default_factory=dict)

    @property
    def finest_depth(self) -> int:
        return max((a.grid.depth for _, a in self.terms), default=1)

    def compose(self, n: int) -> GridFunction2D:
        return compose(self, n)

    def compose_finest(self) -> GridFunction2D:
        return compose(self, self.finest_depth)


def _support_indices(base: VilenkinBase, depth: int, support_depth: int) -> np.ndarray:
    # I_{N_a} contains exactly the indices divisible by M_{N_a}
    step = base.m_at(support_depth)
    return step * np.arange(base.m_at(depth) // step)


def validate_atom(a: Atom, tol: float = 1e-12) -> AtomValidation:
    """Check support, zero mean, and report the smallest sup-bound constant."""
    base, depth = a.grid.base, a.grid.depth
    size = base.m_at(depth)
    sup_idx = _support_indices(base, depth, a.support_depth)
    mask = np.zeros((size, size), dtype=bool)
    mask[np.ix_(sup_idx, sup_idx)] = True
    off = np.abs(a.grid.values[~mask])
    support_excess = float(off.max()) if off.size else 0.0
    mean_excess = float(abs(a.grid.values[mask].sum()) / size**2)
    peak = float(np.abs(a.grid.values).max())
    bound = base.m_at(a.support_depth) ** (2.0 / a.p)
    return AtomValidation(
        support_ok=support_excess == 0.0,
        mean_ok=mean_excess < tol,
        sup_constant=peak / bound,
        degenerate=peak == 0.0,
        support_excess=support_excess,
        mean_excess=mean_excess,
    )


def random_atom(
    base: VilenkinBase, support_depth: int, p: float, seed: int, depth: int | None = None
) -> Atom:
    """Seed-deterministic p-atom: uniform noise on the support cube,
    mean-subtracted, peak-rescaled to be a C = 1 atom."""
    depth = base.depth if depth is None else depth
    if support_depth >= depth:
        raise ValueError("support depth must be strictly less than grid depth")
    size = base.m_at(depth)
    sup_idx = _support_indices(base, depth, support_depth)
    rng = np.random.default_rng(seed)
    block = rng.uniform(-1.0, 1.0, size=(len(sup_idx), len(sup_idx)))
    block -= block.mean()
    peak = np.abs(block).max()
    if peak == 0.0:  # astronomically unlikely; keep the atom degenerate-safe
        block[0, 0], block[1, 1] = 1.0, -1.0
        peak = 1.0
    block *= base.m_at(support_depth) ** (2.0 / p) / peak
    values = np.zeros((size, size), dtype=np.complex128)
    values[np.ix_(sup_idx, sup_idx)] = block
    return Atom(GridFunction2D(base, depth, values), support_depth, p, 1.0)


def kernel_difference(lo: int, hi: int, base: VilenkinBase, depth: int) -> np.ndarray:
    """D_{M_hi} - D_{M_lo}, supported on I_lo; exact integer-valued blocks."""
    return block_kernel(hi, base, depth) - block_kernel(lo, base, depth)


def thm1b_family(base: VilenkinBase, alpha_seq, k: int) -> GridFunction2D:
    """Counterexample driver f_k = (D_{M_{a+1}} - D_{M_a})(x) * D_{M_a}(y),
    a = alpha_k, materialized at depth a+1."""
    a = int(alpha_seq[k - 1])
    depth = a + 1
    if depth > base.depth:
        raise ValueError(f"family member k = {k} needs depth {depth} > {base.depth}")
    dx = kernel_difference(a, a + 1, base, depth)
    dy = block_kernel(a, base, depth)
    return GridFunction2D(base, depth, np.outer(dx, dy))


def thm3b_martingale(base: VilenkinBase, alpha_seq, p: float, K: int) -> AtomicDecomposition:
    """K-term decomposition with lambda_k = M_{a_k}^-(2/p-2) and kernel-difference
    atoms a_k = M_{a_k}^(2/p-2) (D_{M_{a_k+1}} - D_{M_{a_k}}) (x) (same in y)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"exponent p = {p} outside (0, 1)")
    alphas = [int(a) for a in alpha_seq[:K]]
    if len(alphas) < K:
        raise ValueError(f"alpha sequence too short for K = {K}")
    if alphas[-1] + 1 > base.depth:
        raise ValueError(f"K = {K} terms need depth {alphas[-1] + 1} > {base.depth}")
    terms = []
    blocks = []
    for a in alphas:
        depth = a + 1
        pref = base.m_at(a) ** (2.0 / p - 2.0)
        dd = kernel_difference(a, a + 1, base, depth)
        grid = GridFunction2D(base, depth, pref * np.outer(dd, dd))
        lam = base.m_at(a) ** -(2.0 / p - 2.0)
        val = validate_atom(Atom(grid, a, p, 1.0))
        terms.append((lam, Atom(grid, a, p, val.sup_constant)))
        blocks.append((base.m_at(a), base.m_at(a + 1), 1.0))
    return AtomicDecomposition(
        base, p, terms, family="thm3b", blocks=blocks, meta={"alphas": alphas}
    )


@dataclass(frozen=True)
class PhiWeight:
    """Weight Phi(m, n) >= 1, non-decreasing in each argument."""

    kind: str  # "log", "power", or "table"
    theta: float | None = None
    table: tuple[tuple[int, int, float], ...] | None = None

    def __call__(self, m: float, n: float) -> float:
        big = max(m, n)
        if self.kind == "log":
            return 1.0 + math.log2(1.0 + big)
        if self.kind == "power":
            return (1.0 + big) ** self.theta
        if self.kind == "table":
            val = 1.0
            for mm, nn, v in self.table:
                if m >= mm and n >= nn:
                    val = max(val, v)
            return val
        raise ValueError(f"unknown Phi kind {self.kind!r}")

    @property
    def spec(self) -> str:
        if self.kind == "power":
            return f"pow:{self.theta:g}"
        return self.kind


def phi_log() -> PhiWeight:
    return PhiWeight("log")


def phi_power(theta: float) -> PhiWeight:
    return PhiWeight("power", theta=theta)


def parse_phi(spec: str) -> PhiWeight:
    if spec == "log":
        return phi_log()
    if spec.startswith("pow:"):
        return phi_power(float(spec.split(":", 1)[1]))
    raise ValueError(f"unknown Phi spec {spec!r}")


def thm4b_alpha_sequence(alpha: float, K: int, start: int = 2) -> list[int]:
    """Greedy scale selection: a_0 = 2, a_{k+1} = a_k + ceil(alpha) + 2, the
    minimal gap keeping a_k + [alpha] + 1 < a_{k+1}."""
    step = math.ceil(alpha) + 2
    return [start + k * step for k in range(K)]


def thm4b_martingale(
    base: VilenkinBase,
    phi: PhiWeight,
    p: float,
    alpha: float,
    K: int,
    alpha_seq=None,
) -> AtomicDecomposition:
    """Phi-weighted counterexample family over blocks [M_{a_k}, M_{a_k+[alpha]+1}).

    The composed spectrum carries M_{a_k}^(2/p-2) / Phi^(1/4) on the k-th
    square block.  Atoms keep the displayed kernel-difference normalization,
    so their sup constant C can exceed 1 (it stays base-bounded).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"exponent p = {p} outside (0, 1)")
    gap = math.floor(alpha) + 1
    alphas = (
        [int(a) for a in alpha_seq[:K]] if alpha_seq is not None else thm4b_alpha_sequence(alpha, K)
    )
    if alphas[-1] + gap > base.depth:
        raise ValueError(f"K = {K} terms need depth {alphas[-1] + gap} > {base.depth}")
    phi_vals = [phi(base.m_at(a), base.m_at(a)) for a in alphas]
    if any(v2 <= v1 for v1, v2 in zip(phi_vals, phi_vals[1:])):
        raise ValueError("Phi does not increase along the scale sequence (limsup condition)")
    terms = []
    blocks = []
    tail_sum = 0.0
    for a, pv in zip(alphas, phi_vals):
        b = a + gap  # a_k + [alpha] + 1
        pref = base.m_at(b) ** (2.0 / p - 2.0)
        dd = kernel_difference(a, b, base, b)
        grid = GridFunction2D(base, b, pref * np.outer(dd, dd))
        lam = (base.m_at(b) / base.m_at(a)) ** -(2.0 / p - 2.0) * pv**-0.25
        val = validate_atom(Atom(grid, a, p, 1.0))
        terms.append((lam, Atom(grid, a, p, val.sup_constant)))
        blocks.append((base.m_at(a), base.m_at(b), base.m_at(a) ** (2.0 / p - 2.0) * pv**-0.25))
        tail_sum += pv ** (-p / 4.0)
    return AtomicDecomposition(
        base,
        p,
        terms,
        family="thm4b",
        blocks=blocks,
        meta={
            "alphas": alphas,
            "alpha": alpha,
            "phi": phi.spec,
            "phi_tail_sum": tail_sum,
        },
    )


def compose(d: AtomicDecomposition, n: int) -> GridFunction2D:
    """f_{n,n} = sum_k lambda_k S_{M_n,M_n} a_k at the finest atom depth."""
    depth = d.finest_depth
    if n > depth:
        raise ValueError(f"filtration level {n} exceeds finest depth {depth}")
    size = d.base.m_at(depth)
    acc = np.zeros((size, size), dtype=np.complex128)
    for lam, atom in d.terms:
        g = refine2d(atom.grid, depth)
        acc += lam * cond_expectation(g, n).values
    return GridFunction2D(d.base, depth, acc)


def truncated_spectrum(d: AtomicDecomposition, m: int, n: int, depth: int) -> np.ndarray:
    """Coefficients of S_{m,n} f on a depth-d index grid, from the block pattern.

    Only available for decompositions with analytically known square blocks;
    avoids materializing grids at depths where M_N^2 is untractable.
    """
    if d.blocks is None:
        raise ValueError("decomposition has no analytic block pattern")
    size = d.base.m_at(depth)
    if m > size or n > size:
        raise ValueError("truncation indices exceed the requested grid")
    spec = np.zeros((size, size), dtype=np.complex128)
    for lo, hi, w in d.blocks:
        if lo >= size:
            continue
        spec[lo : min(hi, m), lo : min(hi, n)] = w
    spec[m:, :] = 0.0
    spec[:, n:] = 0.0
    return spec


# ---------------------------------------------------------------------------
# manifests: decompositions are stored as recipes, never as raw grids


def to_manifest(d: AtomicDecomposition) -> dict:
    base_spec = d.base.spec or ",".join(str(g) for g in d.base.generators)
    out = {
        "base": base_spec,
        "p": d.p,
        "family": d.family,
        "terms": [{"lambda": lam, "alpha": int(m)} for (lam, _), m in zip(d.terms, d.meta.get("alphas", []))],
    }
    out.update({k: v for k, v in d.meta.items() if k != "alphas"})
    return out


def from_manifest(manifest: dict) -> AtomicDecomposition:
    base = parse_base_spec(manifest["base"])
    p = float(manifest["p"])
    family = manifest["family"]
    alphas = [t["alpha"] for t in manifest["terms"]]
    if family == "thm3b":
        return thm3b_martingale(base, alphas, p, len(alphas))
    if family == "thm4b":
        return thm4b_martingale(
            base,
            parse_phi(manifest["phi"]),
            p,
            float(manifest["alpha"]),
            len(alphas),
            alpha_seq=alphas,
        )
    raise ValueError(f"cannot regenerate family {family!r} from a manifest")


def manifest_json(d: AtomicDecomposition) -> str:
    return json.dumps(to_manifest(d), sort_keys=True, indent=2)
