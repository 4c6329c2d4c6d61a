"""Strong summability inside the cone, end to end.

Weighted sums of partial-sum norms over index pairs of comparable size
stay bounded by the Hardy quasi-norm.  The runner samples seeded atoms at
two consecutive depths and checks that the worst ratio barely moves; the
same run is available from the shell as

    vilenkin strong-sum --base 2x5 --depth 3 --p 0.75 --samples 100 \\
        --seed 1000 --out records.csv

with exit code 0 exactly when the drift check passes.
"""

from vilenkin import ExperimentConfig, render_csv, run_experiment

cfg = ExperimentConfig(
    "strong-sum", base="2x5", depth=3, p=0.75, alpha=1.0, samples=20, seed=1000
)
r = run_experiment(cfg)
print(
    f"max ratio at depth 3: {r.summary['max_ratio_lo']:.4f}, "
    f"depth 4: {r.summary['max_ratio_hi']:.4f}, drift {r.summary['drift']:.3f}"
)
print(f"passed: {r.passed}")

print("\nfirst lines of the deterministic CSV record stream:")
for line in render_csv(r).splitlines()[:6]:
    print(" ", line)
