"""CHSH Bell-inequality violation for two-mode Gaussian states.

Phase-space evaluation of pseudospin correlators for two-mode squeezed
thermal states, CHSH optimization over measurement settings and bin size,
logarithmic negativity, parameter sweeps, and independent verification
oracles (Fock matrices, Monte-Carlo Wigner sampling, brute-force
quadrature).
"""

from .bell import (
    TSIRELSON,
    BellResult,
    LGrid,
    bell_binned,
    bell_large_l_asymptote,
    bell_optimize_l,
    bell_unbinned,
    bell_value,
    chen_bound,
    fock_bound_check,
    grouped_bell_closed_form,
)
from .errors import (
    AccuracyError,
    GaussBellError,
    InvalidInputError,
    NumericalDomainError,
)
from .gaussian import (
    OMEGA,
    GaussianState,
    TmstParams,
    log_negativity,
    nu_thermal,
    squeezing_symplectic,
    symplectic_from_hamiltonian,
    thermal_state,
    tmst_state,
    wigner_eval,
)
from .oracles import (
    FockTruncation,
    McControl,
    auto_bins,
    fock_bell_chen,
    fock_bell_grouped,
    mc_correlators,
    quadrature_correlators,
)
from .pseudospin import (
    Binned,
    CorrelatorSet,
    FockChen,
    FockGrouped,
    OperatorChoice,
    SeriesControl,
    Unbinned,
    binned_correlators,
    cross_correlators,
    gamma_factor,
    sxx_correlator,
    syy_correlator,
    szz_correlator,
    unbinned_correlators,
    x_term,
    z_term,
)
from .scan import (
    ContourSpec,
    GridSpec,
    contour_radius,
    en_map_and_contours,
    sweep_b_vs_l,
    violation_boundary_r,
    violation_map,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "TSIRELSON",
    "AccuracyError",
    "BellResult",
    "Binned",
    "ContourSpec",
    "CorrelatorSet",
    "FockChen",
    "FockGrouped",
    "FockTruncation",
    "GaussBellError",
    "GaussianState",
    "GridSpec",
    "InvalidInputError",
    "LGrid",
    "McControl",
    "NumericalDomainError",
    "OMEGA",
    "OperatorChoice",
    "SeriesControl",
    "TmstParams",
    "Unbinned",
    "auto_bins",
    "bell_binned",
    "bell_large_l_asymptote",
    "bell_optimize_l",
    "bell_unbinned",
    "bell_value",
    "binned_correlators",
    "chen_bound",
    "contour_radius",
    "cross_correlators",
    "en_map_and_contours",
    "fock_bell_chen",
    "fock_bell_grouped",
    "fock_bound_check",
    "gamma_factor",
    "grouped_bell_closed_form",
    "log_negativity",
    "mc_correlators",
    "nu_thermal",
    "quadrature_correlators",
    "squeezing_symplectic",
    "sweep_b_vs_l",
    "sxx_correlator",
    "symplectic_from_hamiltonian",
    "syy_correlator",
    "szz_correlator",
    "thermal_state",
    "tmst_state",
    "unbinned_correlators",
    "violation_boundary_r",
    "violation_map",
    "wigner_eval",
    "x_term",
    "z_term",
]
