"""Two-dimensional Vilenkin-Fourier analysis on bounded Vilenkin groups.

The package provides the group arithmetic, a fast separable transform,
partial-sum (Dirichlet) kernels with exact cell integrals, rectangular
partial-sum and maximal operators, the Lp / weak-Lp / Hardy norm stack,
counterexample martingale constructions, and deterministic experiment
drivers with a command-line front end.
"""

from .constructions import (
    Atom,
    AtomicDecomposition,
    PhiWeight,
    from_manifest,
    manifest_json,
    parse_phi,
    random_atom,
    thm1b_family,
    thm3b_martingale,
    thm4b_alpha_sequence,
    thm4b_martingale,
    to_manifest,
    truncated_spectrum,
    validate_atom,
)
from .group import (
    DigitExpansion,
    GroupPoint,
    VilenkinBase,
    digits_of,
    in_cell,
    index_of_digits,
    make_base,
    parse_base_spec,
    point_add,
    point_of,
    point_sub,
    shell_of,
)
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    emit,
    render_csv,
    render_json,
    run_convergence,
    run_experiment,
    run_lemma1,
    run_sharpness,
    run_strong_summability,
)
from .kernels import (
    KernelEstimateReport,
    block_kernel,
    dirichlet,
    dirichlet_block,
    dirichlet_table,
    kernel_integral_1d,
    kernel_integral_2d,
    lemma1_sweep,
    max_ratios_by_region,
)
from .norms import (
    NormValue,
    hardy_square_norm,
    hardy_upper_from_atoms,
    lp_quasinorm,
    modulus_of_continuity,
    weak_lp_norm,
)
from .operators import (
    ConeParams,
    cond_expectation,
    dyadic_maximal,
    partial_sum2d,
    partial_sum_table,
    weighted_maximal,
)
from .transform import (
    GridFunction1D,
    GridFunction2D,
    Spectrum1D,
    Spectrum2D,
    character,
    character_values,
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
    transform2d,
)

__version__ = "0.1.0"
