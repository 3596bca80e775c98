"""
Systems of translates
=====================

Finite sections of a translate system are studied through the singular
values of their synthesis matrix.  Counting shifts in long intervals gives
effective density witnesses.
"""

import numpy as np

from modframe import GridSpec, Signal, gaussian
from modframe.translates import (IntervalFamily, TranslateSet, completeness_residual,
                                 effective_density, section_spectrum, spectral_notch)

grid = GridSpec.centered(64, 64)
g = gaussian(grid, 0.0, 1.0)
lam = TranslateSet(0.5 * np.arange(128) - 32)

# the smallest singular value drifts down as the section grows
for N in (8, 16, 32, 64, 128):
    rep = section_spectrum(g, lam, N)
    print(f"N = {N:3d}  sigma_min {rep.sigma_min:.3e}  sigma_max {rep.sigma_max:.3f}")

# a generator whose spectrum vanishes on [2, 3] cannot reach signals living there
notched = spectral_notch(g, 2.0, 3.0)
wave = Signal(np.exp(2j * np.pi * 2.5 * grid.times()), grid)
print("residual of band probe :", completeness_residual(notched, lam, 32, wave))

rep = effective_density(TranslateSet.integers(1, 1025), IntervalFamily.dyadic(0, 10))
print("dyadic witness         :", rep.witness_C, "divergent family:", rep.family_divergent)
