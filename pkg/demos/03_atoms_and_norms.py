"""Atoms, the norm stack, and the modulus of continuity.

A p-atom lives on a cube of cells, has zero mean, and is capped in sup norm
by the inverse measure of its support to the power 1/p.  The dyadic maximal
function of an atom produces a bounded Hardy quasi-norm, which is the
mechanism behind boundedness of operators defined on atoms.
"""

import numpy as np

from vilenkin import (
    hardy_square_norm,
    lp_quasinorm,
    modulus_of_continuity,
    parse_base_spec,
    random_atom,
    thm3b_martingale,
    validate_atom,
    weak_lp_norm,
)

base = parse_base_spec("2x5")
p = 0.75

print("seeded random atoms (support cube side 1/M_s):")
for seed in range(4):
    support = int(np.random.default_rng(seed).integers(0, 4))
    atom = random_atom(base, support, p, seed)
    rep = validate_atom(atom)
    g = atom.grid
    print(
        f"  seed {seed}: support depth {support}, valid={rep.ok}, "
        f"Lp={lp_quasinorm(g, p).value:.4f}, weak-Lp={weak_lp_norm(g, p).value:.4f}, "
        f"Hardy={hardy_square_norm(g, p).value:.4f}"
    )

print("\ncoefficient-weighted atomic sums with slowly decaying moduli:")
base6 = parse_base_spec("2x6")
d = thm3b_martingale(base6, [1, 2, 3, 4, 5], 0.5, 5)
for n in range(1, 5):
    omega = modulus_of_continuity(d, n, 0.5).value
    scaled = omega * base6.m_at(n) ** 2
    print(f"  omega(1/M_{n}) = {omega:.6f}, scaled by M_n^(2/p-2): {scaled:.4f}")
