"""bmlab: a numerical laboratory for bilinear Fourier multiplier operators.

Signals live on a uniform periodic grid with an integral-normalized
discrete transform; bilinear operators are evaluated by regrouping the
double frequency sum on a doubled frequency grid, which keeps the
classical commutation identities exact algebraic statements on the grid.
"""
from .signals import (
    ExponentTriple,
    GridError,
    GridSpec,
    GuardError,
    SampledSignal,
    Spectrum,
    dft,
    idft,
    lp_norm,
    make_gaussian,
    random_bandlimited,
)
from .symbols import AtomicMeasure, Symbol1D, Symbol2D, lift, symbol_from_measure
from .engine import (
    apply_bilinear,
    apply_bilinear_direct,
    apply_delta_symbol,
    apply_kernel,
    trilinear_pairing,
)
from .operators import bilinear_fractional, bilinear_hilbert_pv, bilinear_hilbert_symbol
from .actions import dilate, modulate, translate
from .identities import IDENTITY_IDS, IdentityCase, check_identity, run_suite
from .normlab import NormEstimate, estimate_norm, gaussian_scan, norm_ratio

__version__ = "0.1.0"
