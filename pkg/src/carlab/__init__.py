"""carlab: a 2D spectral lab for weighted Cauchy-Riemann estimates.

The toolkit samples closed-form test functions on a periodic grid, realizes
the first-order operator and its regularized inverses as Fourier multipliers,
and measures every inequality of the weighted-estimate proof chain: the
Carleman ratio and its uniformity in the weight power, dyadic band kernels
and their Plancherel bound, Young's inequality at the gap exponents, the
square-function/Minkowski chain, Hoelder absorption, and the resulting
unique-continuation bootstrap with a certified interior sup bound.
"""

from .errors import (
    AnnulusLeakageError,
    CarlabError,
    ContractionRefusal,
    ConvergenceError,
    DegenerateDenominatorError,
    ExclusionZoneError,
    UnresolvedBandError,
)
from .grid import (
    FREQUENCY,
    Exponents,
    Field,
    GridSpec,
    POSITION,
    fft,
    frequency_l2_norm,
    ifft,
    lp_norm,
    lp_norm_outside_ball,
    make_grid,
    restrict_ball,
    sample,
    weighted_lp_norm,
)
from .crf1 import read_field, write_field
from .zoo import (
    AnalyticField,
    Potential,
    bump,
    entire_seed,
    gaussian,
    holo_window,
    power_weight,
    radial_power_potential,
    resolve_label,
    ring_potential,
)
from .spectral import (
    DyadicBand,
    LPFamily,
    MultiplierSpec,
    apply_T,
    apply_Tk,
    apply_cr,
    apply_dbar,
    band_limited_noise,
    band_projections,
    cauchy_solve,
    kernel_Tk,
    lp_family,
    lp_project,
    periodic_convolve,
    psi_delta,
    resolvable_bands,
    square_function,
)
from .reports import EmpiricalConstant, VerificationReport
from .inequalities import (
    annulus_leakage,
    carleman_ratio,
    carleman_sweep,
    commutation_residual,
    detect_vanishing_radius,
    holder_gap_check,
    kernel_l2_bound,
    lp_chain_report,
    standard_T_family,
    standard_band_family,
    t_operator_ratio,
    tk_operator_ratio,
    tk_uniformity,
    young_check,
)
from .dbar import (
    BootstrapTrace,
    DbarSolution,
    WitnessReport,
    composite_operator_norm,
    dyadic_rescale,
    inequality_witness,
    picard_solve,
    scale_transform,
    uc_bootstrap,
    vanishing_detector,
)

__version__ = "0.1.0"
