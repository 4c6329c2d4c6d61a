"""Walk through the group arithmetic and the fast separable transform.

The grid of depth N holds one sample per cell of the product group; indices
are mixed-radix integers, least-significant digit first.  The transform
factors into one small dense DFT stage per digit, so analysis of a grid of
M_N points costs O(M_N * sum(m_k)) instead of O(M_N^2).
"""

import numpy as np

from vilenkin import (
    character_matrix,
    digits_of,
    forward,
    grid1d,
    inverse,
    parse_base_spec,
)

base = parse_base_spec("2,3,4,2,3")
print(f"base {base.generators}, cumulative products {base.products}")

n = 57
exp = digits_of(n, base)
print(f"index {n} has digits {exp.digits} (order {exp.order})")

rng = np.random.default_rng(0)
f = grid1d(base, base.depth, rng.normal(size=base.size) + 1j * rng.normal(size=base.size))

fast = forward(f, mode="fast").coefficients
naive = forward(f, mode="naive").coefficients
print(f"fast vs naive analysis: max deviation {np.abs(fast - naive).max():.2e}")

back = inverse(forward(f))
print(f"round trip error: {np.abs(back.values - f.values).max():.2e}")

w = character_matrix(base.generators)
gram = np.abs(w.conj() @ w.T / base.size - np.eye(base.size)).max()
print(f"character orthonormality defect: {gram:.2e}")
