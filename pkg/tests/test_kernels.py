import numpy as np
import pytest

from vilenkin.group import parse_base_spec, point_of
from vilenkin.kernels import (
    block_kernel,
    dirichlet,
    dirichlet_block,
    dirichlet_table,
    kernel_integral_1d,
    kernel_integral_2d,
    kernel_integral_2d_oracle,
    lemma1_sweep,
    max_ratios_by_region,
)
from vilenkin.transform import character_matrix


@pytest.mark.parametrize("spec", ["2x5", "2,3,4,2,3"])
def test_block_kernel_is_scaled_cell_indicator(spec):
    base = parse_base_spec(spec)
    depth = base.depth
    for n in range(depth + 1):
        vals = block_kernel(n, base, depth)
        expect = np.zeros(base.size)
        expect[:: base.m_at(n)] = base.m_at(n)
        assert np.max(np.abs(vals - expect)) < 1e-12


@pytest.mark.parametrize("spec", ["2,3x2", "2x5"])
def test_dirichlet_direct_is_partial_character_sum(spec):
    base = parse_base_spec(spec)
    w = character_matrix(base.generators)
    for n in (0, 1, 5, base.size // 2, base.size):
        vals = dirichlet(n, base, base.depth, method="direct").values
        assert np.max(np.abs(vals - w[:n].sum(axis=0))) < 1e-10


@pytest.mark.parametrize("spec", ["2x5", "2,3,4,2,3", "2,3x3"])
def test_closed_form_matches_direct_everywhere(spec):
    base = parse_base_spec(spec)
    for n in range(base.size):
        a = dirichlet(n, base, base.depth, method="direct").values
        b = dirichlet(n, base, base.depth, method="closed").values
        assert np.max(np.abs(a - b)) < 1e-10


def test_dirichlet_block_identity():
    # D_{s M_n} = D_{M_n} * sum_{k<s} r_n^k pointwise
    base = parse_base_spec("2,3x2")
    depth = base.depth
    w = character_matrix(base.generators)
    for n in range(depth):
        for s in range(1, base.radix(n) + 1):
            got = dirichlet_block(s, n, base, depth).values
            r_n = w[base.m_at(n)]
            expect = block_kernel(n, base, depth) * sum(r_n**k for k in range(s))
            assert np.max(np.abs(got - expect)) < 1e-10


def test_dirichlet_table_rows():
    base = parse_base_spec("2x4")
    table = dirichlet_table(base, base.depth, base.size)
    for n in (0, 1, 3, 7, 16):
        assert np.max(np.abs(table[n] - dirichlet(n, base, 4).values)) < 1e-12


def test_out_of_range_orders_rejected():
    base = parse_base_spec("2x4")
    with pytest.raises(ValueError):
        dirichlet(-1, base, 4)
    with pytest.raises(ValueError):
        dirichlet(17, base, 4)
    with pytest.raises(ValueError):
        dirichlet(3, base, 4, method="mystery")


def test_2d_integral_separates_exactly():
    base = parse_base_spec("2,3x2")  # M_N = 36 <= 64
    rng = np.random.default_rng(0)
    for _ in range(25):
        m, n = (int(rng.integers(1, base.size + 1)) for _ in range(2))
        x, y = (point_of(int(rng.integers(0, base.size)), base) for _ in range(2))
        cell = int(rng.integers(0, base.depth + 1))
        fast = kernel_integral_2d(m, n, x, y, cell)
        slow = kernel_integral_2d_oracle(m, n, x, y, cell)
        assert abs(fast - slow) < 1e-12


def test_1d_integral_against_brute_force():
    base = parse_base_spec("2x4")
    rng = np.random.default_rng(1)
    for _ in range(15):
        n = int(rng.integers(1, base.size + 1))
        x = point_of(int(rng.integers(0, base.size)), base)
        cell = int(rng.integers(0, base.depth + 1))
        d = dirichlet(n, base, base.depth).values
        total = sum(
            abs(d[_sub_index(x.index, t, base)])
            for t in range(0, base.size, base.m_at(cell))
        )
        assert abs(kernel_integral_1d(n, x, cell) - total / base.size) < 1e-12


def _sub_index(a: int, b: int, base) -> int:
    """Digitwise (carry-free) subtraction of grid indices."""
    out, mul = 0, 1
    for g in base.generators:
        out += ((a % g - b % g) % g) * mul
        a //= g
        b //= g
        mul *= g
    return out


def test_lemma1_sweep_shapes_and_errors():
    base = parse_base_spec("2,3x3")
    with pytest.raises(ValueError):
        lemma1_sweep(base, 2, [])
    with pytest.raises(ValueError):
        lemma1_sweep(base, base.depth, [0.5])
    reports = lemma1_sweep(base, 2, [0.5, 1.0], samples_per_region=2, seed=3)
    classes = {r.region_class for r in reports}
    assert classes == {"IN-shell", "shell-IN", "shell-shell"}
    ratios = max_ratios_by_region(reports)
    assert set(ratios) == classes
    assert all(np.isfinite(v) and v >= 0 for v in ratios.values())


def test_lemma1_sweep_is_seed_deterministic():
    base = parse_base_spec("2,3x3")
    a = lemma1_sweep(base, 2, [0.25], samples_per_region=3, seed=11)
    b = lemma1_sweep(base, 2, [0.25], samples_per_region=3, seed=11)
    assert a == b
