import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vilenkin.group import parse_base_spec, point_add, point_of
from vilenkin.transform import (
    Spectrum1D,
    Spectrum2D,
    character,
    character_matrix,
    forward,
    forward2d,
    grid1d,
    grid2d,
    inverse,
    inverse2d,
    load_grid,
    refine1d,
    refine2d,
    save_grid,
)

BASES = ["2x5", "2,3,4,2,3", "2,3x2"]


def _random_grid(base, depth, seed, two_dim=False):
    rng = np.random.default_rng(seed)
    size = base.m_at(depth)
    shape = (size, size) if two_dim else (size,)
    vals = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return grid2d(base, depth, vals) if two_dim else grid1d(base, depth, vals)


@pytest.mark.parametrize("spec", BASES)
def test_characters_are_multiplicative(spec):
    base = parse_base_spec(spec)
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(0, base.size))
        a, b = (point_of(int(rng.integers(0, base.size)), base) for _ in range(2))
        lhs = character(n, point_add(a, b))
        rhs = character(n, a) * character(n, b)
        assert abs(lhs - rhs) < 1e-12


@pytest.mark.parametrize("spec", BASES)
def test_character_matrix_orthonormal(spec):
    base = parse_base_spec(spec)
    w = character_matrix(base.generators)
    gram = w.conj() @ w.T / base.size
    assert np.max(np.abs(gram - np.eye(base.size))) < 1e-12


@pytest.mark.parametrize("spec", BASES)
def test_fast_equals_naive_1d(spec):
    base = parse_base_spec(spec)
    f = _random_grid(base, base.depth, 1)
    a = forward(f, mode="fast").coefficients
    b = forward(f, mode="naive").coefficients
    assert np.max(np.abs(a - b)) < 1e-10
    back = inverse(forward(f), mode="fast")
    assert np.max(np.abs(back.values - f.values)) < 1e-12


@pytest.mark.parametrize("spec", ["2x4", "2,3x2"])
def test_fast_equals_naive_2d(spec):
    base = parse_base_spec(spec)
    f = _random_grid(base, base.depth, 2, two_dim=True)
    a = forward2d(f, mode="fast").coefficients
    b = forward2d(f, mode="naive").coefficients
    assert np.max(np.abs(a - b)) < 1e-10
    back = inverse2d(forward2d(f))
    assert np.max(np.abs(back.values - f.values)) < 1e-12


@given(st.integers(0, 35))
@settings(max_examples=36)
def test_delta_spectrum_synthesizes_the_character(n):
    base = parse_base_spec("2,3x2")
    coefs = np.zeros(base.size, dtype=np.complex128)
    coefs[n] = 1.0
    g = inverse(Spectrum1D(base, base.depth, coefs))
    w = character_matrix(base.generators)
    assert np.max(np.abs(g.values - w[n])) < 1e-12


def test_shape_validation():
    base = parse_base_spec("2x4")
    with pytest.raises(ValueError):
        grid1d(base, 4, np.zeros(15))
    with pytest.raises(ValueError):
        Spectrum2D(base, 4, np.zeros((16, 8), dtype=np.complex128))


def test_refinement_preserves_spectrum():
    base = parse_base_spec("2x5")
    f = _random_grid(base, 3, 5)
    g = refine1d(f, 5)
    coarse = forward(f).coefficients
    fine = forward(g).coefficients
    assert np.max(np.abs(fine[: len(coarse)] - coarse)) < 1e-12
    assert np.max(np.abs(fine[len(coarse) :])) < 1e-12
    f2 = _random_grid(base, 2, 6, two_dim=True)
    g2 = refine2d(f2, 4)
    c = forward2d(f2).coefficients
    d = forward2d(g2).coefficients
    assert np.max(np.abs(d[: c.shape[0], : c.shape[1]] - c)) < 1e-12


def test_save_load_round_trip(tmp_path):
    base = parse_base_spec("2,3x2")
    for two_dim in (False, True):
        f = _random_grid(base, base.depth, 9, two_dim=two_dim)
        path = tmp_path / f"grid{int(two_dim)}.txt"
        save_grid(path, f)
        g = load_grid(path)
        assert g.base.generators == base.generators
        assert g.depth == f.depth
        assert np.array_equal(g.values, f.values)


def test_load_rejects_malformed_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("not-a-grid v9; base=2x2\n1,0\n")
    with pytest.raises((ValueError, KeyError)):
        load_grid(path)
