"""Numerical time-frequency analysis on periodic grids.

Gabor and Wilson systems, short-time Fourier transforms, box-coefficient
modulation-space norms, Rademacher coefficients, the discrete Hilbert
transform and translate-system diagnostics.
"""
from .errors import InvalidArgument, ResourceLimit, UnsupportedExponent
from .signal import (GridSpec, Signal, box_window, fourier, gaussian, inner, inverse_fourier,
                     lp_norm, modulate, sine_bump, translate)
from .gabor import (CoeffGrid, GaborLattice, analyze, cover_sum, gram, make_tight_window,
                    roundtrip_error, sign_flip_ratio, synthesize, wilson_system)
from .modspace import (NormReport, PlaneSpec, StftGrid, box_coefficients, default_window,
                       invariance_suite, m1_surrogate, moyal_residual, mp_norm_box, mp_norm_stft,
                       stft)
from .special import (PiecewiseConstant, decay_sequence, exact_fourier_coeff, khintchine_bounds,
                      rademacher, rademacher_coeff_closed_form, rademacher_norm_ratio,
                      wilson_bumps)
from .translates import (DensityReport, IntervalFamily, SectionReport, TranslateSet,
                         completeness_residual, effective_density, section_spectrum,
                         summability_partial, uniform_gap, vanishing_products)
from .hilbert import BiSequence, discrete_hilbert, hilbert_norm_estimate
from .config import RunConfig, parse_config
from .verify import VerifyReport, run_verify

__version__ = "0.1.0"
