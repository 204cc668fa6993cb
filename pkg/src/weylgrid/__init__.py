"""Weyl, Fourier-Wigner, and symplectic Fourier transforms on a self-dual
phase-space grid, with Schatten-norm diagnostics and a verification harness
for the norm-equivalence bounds satisfied by compactly supported
distributions."""

from .grid import (
    Atom,
    AtomicSum,
    Box,
    CompactDistribution,
    Density,
    GridFunction,
    OperatorMatrix,
    PhaseGrid,
    SpatialVector,
    build_distribution,
    circle_distribution,
    fractional_shift,
    lp_norm,
    make_phase_grid,
    pair_bilinear,
)
from .transforms import (
    beta_check,
    fourier_2d,
    fourier_wigner,
    gamma,
    gaussian_envelope,
    rank_one,
    reflect,
    rho_matrix,
    sft_of_distribution,
    symplectic_ft,
    weyl,
    weyl_definitional_pairing,
)
from .schatten import (
    SchattenReport,
    compactness_profile,
    schatten_norm,
    schatten_report,
    singular_values,
)
from .smoothing import (
    WindowPair,
    bump_derivative,
    conjugation_smoothing,
    mollifier_samples,
    mollify,
    smooth_step,
    window_and_ck,
)
from .verify import (
    CheckReport,
    SweepResult,
    TestFamily,
    builtin_families,
    check_adjointness,
    check_eq1,
    check_eq2,
    converse_check,
    family_by_name,
    mollifier_convergence,
    oracle_check,
    theorem_sweep,
)

__version__ = "0.1.0"
