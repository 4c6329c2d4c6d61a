"""Sharpness runs: weight families that are too small fail, visibly.

Dividing the rectangular partial sums by the critical weight (m+n)^(2/p-2)
gives a bounded maximal operator.  Replace the weight by anything with a
smaller growth envelope and a concrete separable-kernel family drives the
weak-Lp/Hardy ratio to infinity; at desk scale that shows up as steady
geometric growth in k.  With the full critical weight the same ratios stay
flat - both behaviours printed side by side below.
"""

from vilenkin import ExperimentConfig, run_experiment

for phi, label in (("pow:2", "critical weight"), ("pow:1", "undersized weight")):
    cfg = ExperimentConfig(
        "sharpness", base="2x7", depth=6, p=0.5, family="thm1b", phi=phi
    )
    r = run_experiment(cfg)
    print(f"{label}: hypothesis_met={r.summary['hypothesis_met']}")
    print(f"  ratios: {r.summary['ratios']}")

print("\nweighted-sum divergence for a weight within a log of critical:")
cfg = ExperimentConfig(
    "sharpness", base="2x8", depth=8, p=0.5, family="thm4b", phi="log", samples=40
)
r = run_experiment(cfg)
print(f"  functionals: {r.summary['functionals']} (strictly increasing: {r.passed})")
