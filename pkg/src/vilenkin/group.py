"""Mixed-radix arithmetic on truncated bounded Vilenkin groups.

A group is described by a generator sequence ``m_0, ..., m_{N-1}`` (each
``>= 2``) with cumulative products ``M_0 = 1, M_{k+1} = m_k * M_k``.  Points
are tuples of digits ``x_j in {0, ..., m_j - 1}``; the index of a point is
its mixed-radix value ``sum_j x_j * M_j``, with ``x_0`` least significant.
All functions on the truncated group are arrays indexed this way.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Exact integer products only; indices must stay addressable as int64.
_MAX_PRODUCT = 2**62

DEFAULT_M_SUP = 64


@dataclass(frozen=True)
class VilenkinBase:
    """Generator sequence and its cumulative products, immutable."""

    generators: tuple[int, ...]
    products: tuple[int, ...]
    depth: int
    spec: str | None = None

    def radix(self, j: int) -> int:
        return self.generators[j]

    @property
    def size(self) -> int:
        """Number of grid points at full depth."""
        return self.products[self.depth]

    def m_at(self, n: int) -> int:
        """Product M_n = m_0 * ... * m_{n-1}."""
        return self.products[n]

    def truncated(self, depth: int) -> "VilenkinBase":
        """The same generator sequence cut to a shallower depth."""
        if depth > self.depth:
            raise ValueError(f"cannot extend base of depth {self.depth} to {depth}")
        return VilenkinBase(
            self.generators[:depth], self.products[: depth + 1], depth, self.spec
        )

    def __repr__(self) -> str:
        gens = ",".join(str(g) for g in self.generators)
        return f"VilenkinBase({gens})"


def make_base(
    generators, depth: int | None = None, m_sup: int = DEFAULT_M_SUP, spec: str | None = None
) -> VilenkinBase:
    """Build a :class:`VilenkinBase` from a generator sequence.

    Raises ``ValueError`` with a distinct message for each failure mode:
    zero depth, a generator below 2, a generator above ``m_sup``, and a
    product overflowing the exact integer range.
    """
    gens = tuple(int(g) for g in generators)
    if depth is None:
        depth = len(gens)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if len(gens) < depth:
        raise ValueError(f"need {depth} generators, got {len(gens)}")
    gens = gens[:depth]
    for j, g in enumerate(gens):
        if g < 2:
            raise ValueError(f"generator m_{j} = {g} is below 2")
        if g > m_sup:
            raise ValueError(f"generator m_{j} = {g} exceeds the bound m_sup = {m_sup}")
    products = [1]
    for g in gens:
        nxt = products[-1] * g
        if nxt > _MAX_PRODUCT:
            raise ValueError("product M_depth overflows the exact integer range")
        products.append(nxt)
    return VilenkinBase(gens, tuple(products), depth, spec)


_SPEC_RE = re.compile(r"^(?P<block>\d+(?:,\d+)*)(?:x(?P<reps>\d+))?$")


def parse_base_spec(spec: str, m_sup: int = DEFAULT_M_SUP) -> VilenkinBase:
    """Parse a base specification string ``"m0,m1,...[xR]"``.

    The optional ``xR`` suffix repeats the listed block R times, e.g.
    ``"2,3x4"`` gives generators (2,3,2,3,2,3,2,3).
    """
    m = _SPEC_RE.match(spec.strip())
    if m is None:
        raise ValueError(f"malformed base spec {spec!r}")
    block = [int(t) for t in m.group("block").split(",")]
    reps = int(m.group("reps")) if m.group("reps") else 1
    return make_base(block * reps, m_sup=m_sup, spec=spec.strip())


@dataclass(frozen=True)
class GroupPoint:
    """A point of the depth-N truncation, stored as a digit tuple."""

    digits: tuple[int, ...]
    base: VilenkinBase
    depth: int

    def __post_init__(self):
        if len(self.digits) != self.depth:
            raise ValueError("digit count must equal depth")
        for j, d in enumerate(self.digits):
            if not 0 <= d < self.base.radix(j):
                raise ValueError(f"digit x_{j} = {d} out of range for m_{j}")

    @property
    def index(self) -> int:
        return index_of_digits(self.digits, self.base)


def point_of(index: int, base: VilenkinBase, depth: int | None = None) -> GroupPoint:
    """Inverse of the mixed-radix bijection: index -> point."""
    depth = base.depth if depth is None else depth
    if not 0 <= index < base.m_at(depth):
        raise ValueError(f"index {index} out of range for depth {depth}")
    digits = []
    for j in range(depth):
        digits.append(index % base.radix(j))
        index //= base.radix(j)
    return GroupPoint(tuple(digits), base, depth)


def index_of_digits(digits, base: VilenkinBase) -> int:
    return sum(int(d) * base.m_at(j) for j, d in enumerate(digits))


def unit_point(n: int, base: VilenkinBase, depth: int | None = None) -> GroupPoint:
    """The point e_n with a single 1 in position n."""
    depth = base.depth if depth is None else depth
    digits = [0] * depth
    digits[n] = 1
    return GroupPoint(tuple(digits), base, depth)


@dataclass(frozen=True)
class DigitExpansion:
    """Mixed-radix digits of a nonnegative integer n = sum n_j M_j."""

    n: int
    digits: tuple[int, ...]
    order: int  # |n|, largest j with n_j != 0; 0 for n = 0 together with is_zero
    is_zero: bool

    @property
    def is_in_N_n0(self) -> bool:
        """Membership in N_{n_0}: the least significant digit equals 1."""
        return bool(self.digits) and self.digits[0] == 1


def digits_of(n: int, base: VilenkinBase) -> DigitExpansion:
    """Unique mixed-radix expansion of ``n`` with respect to the base."""
    if not 0 <= n < base.size:
        raise ValueError(f"n = {n} out of range [0, {base.size})")
    if n == 0:
        return DigitExpansion(0, (), 0, True)
    digits = []
    rem = n
    j = 0
    while rem > 0:
        digits.append(rem % base.radix(j))
        rem //= base.radix(j)
        j += 1
    return DigitExpansion(n, tuple(digits), len(digits) - 1, False)


def point_sub(x: GroupPoint, t: GroupPoint) -> GroupPoint:
    """Coordinatewise modular subtraction (x - t)_j = (x_j - t_j) mod m_j."""
    if x.base.generators != t.base.generators or x.depth != t.depth:
        raise ValueError("points must share base and depth")
    digits = tuple(
        (a - b) % x.base.radix(j) for j, (a, b) in enumerate(zip(x.digits, t.digits))
    )
    return GroupPoint(digits, x.base, x.depth)


def point_add(x: GroupPoint, t: GroupPoint) -> GroupPoint:
    """Coordinatewise modular addition."""
    if x.base.generators != t.base.generators or x.depth != t.depth:
        raise ValueError("points must share base and depth")
    digits = tuple(
        (a + b) % x.base.radix(j) for j, (a, b) in enumerate(zip(x.digits, t.digits))
    )
    return GroupPoint(digits, x.base, x.depth)


def in_cell(x: GroupPoint, n: int, center: GroupPoint) -> bool:
    """Whether x lies in the cylinder I_n(center): agreement in digits < n."""
    if n > x.depth:
        raise ValueError(f"cylinder depth {n} exceeds point depth {x.depth}")
    return x.digits[:n] == center.digits[:n]


def shell_of(x: GroupPoint, n_max: int | None = None) -> int:
    """Index s of the shell I_s \\ I_{s+1} containing x (around the origin).

    Returns ``n_max`` (default: point depth) when all inspected digits
    vanish, i.e. when x lies in the cylinder I_{n_max}.
    """
    n_max = x.depth if n_max is None else n_max
    for j in range(n_max):
        if x.digits[j] != 0:
            return j
    return n_max


@lru_cache(maxsize=64)
def digit_table(generators: tuple[int, ...]) -> np.ndarray:
    """Digits of every index: shape (M_N, N), entry [i, j] = j-th digit of i."""
    products = np.cumprod((1,) + generators)
    size = int(products[-1])
    idx = np.arange(size)
    cols = [(idx // int(products[j])) % generators[j] for j in range(len(generators))]
    return np.stack(cols, axis=1)


def sub_index_table(base: VilenkinBase, depth: int | None = None) -> np.ndarray:
    """Matrix S with S[x, t] = index of the point x - t (digitwise)."""
    depth = base.depth if depth is None else depth
    gens = base.generators[:depth]
    dt = digit_table(gens)
    out = np.zeros((base.m_at(depth), base.m_at(depth)), dtype=np.int64)
    for j, g in enumerate(gens):
        out += ((dt[:, None, j] - dt[None, :, j]) % g) * base.m_at(j)
    return out


def sub_indices(x_index: int, t_indices: np.ndarray, base: VilenkinBase, depth: int) -> np.ndarray:
    """Indices of x - t for a fixed x and an array of t indices."""
    gens = base.generators[:depth]
    dt = digit_table(gens)
    xd = dt[x_index]
    td = dt[t_indices]
    out = np.zeros(len(t_indices), dtype=np.int64)
    for j, g in enumerate(gens):
        out += ((xd[j] - td[:, j]) % g) * base.m_at(j)
    return out


def index_add(i: int, k: int, base: VilenkinBase, depth: int | None = None) -> int:
    """Digitwise modular addition lifted to indices (carry-free)."""
    depth = base.depth if depth is None else depth
    out = 0
    for j in range(depth):
        g = base.radix(j)
        out += ((i % g + k % g) % g) * base.m_at(j)
        i //= g
        k //= g
    return out


def shell_partition_counts(base: VilenkinBase, depth: int) -> list[int]:
    """Cardinalities |I_s \\ I_{s+1}| for s = 0..depth-1 within the index grid."""
    size = base.m_at(depth)
    return [size // base.m_at(s) - size // base.m_at(s + 1) for s in range(depth)]


def count_in_N_n0(base: VilenkinBase, k: int, alpha: float) -> int:
    """Exact count of n in N_{n_0} with M_k <= n <= 2^alpha * M_k."""
    lo, hi = base.m_at(k), int(2**alpha * base.m_at(k))
    m0 = base.radix(0)
    # n ≡ 1 (mod m_0) within [lo, hi]
    first = lo + ((1 - lo) % m0)
    if first > hi:
        return 0
    return (hi - first) // m0 + 1
