"""Computational harmonic analysis on bounded Vilenkin groups.

Finite-depth models of the groups, the Vilenkin character system with a
fast mixed-radix transform, Dirichlet and Fejer kernels, exact L_p and
martingale Hardy-space quasi-norms, executable kernel-identity checks, and
the strong-convergence experiments built on top of them.
"""

from .funcspace import GridFunction, integrate, lp_quasinorm, refine, weak_lp
from .group import (
    DigitExpansion,
    GeneratorSequence,
    cylinder_indices,
    from_digits,
    group_add,
    group_sub,
    index_point,
    nonzero_blocks,
    point_index,
    scale_factors,
    to_digits,
    variation,
    variation_star,
)
from .hardy import (
    Atom,
    AtomicDecomposition,
    CounterexampleMartingale,
    FiniteMartingale,
    assemble_martingale,
    conditional_expectation,
    counterexample_martingale,
    function_hardy_quasinorm,
    hardy_quasinorm,
    is_p_atom,
    maximal_function,
    select_alphas,
    sigma_norm_profile,
    sigma_split_check,
    strong_sums,
)
from .identities import CheckReport
from .transform import (
    SpectralVector,
    dirichlet,
    fejer_kernel,
    fejer_mean,
    forward_transform,
    inverse_transform,
    lebesgue_constant,
    naive_forward_transform,
    partial_sum,
    rademacher,
    synthesize,
    vilenkin_fn,
)

__version__ = "0.1.0"
