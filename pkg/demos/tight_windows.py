"""
Painless tight windows and Wilson bases
=======================================

Dividing a bump by the square root of its cover sum makes a tight window.
Pairs of modulations of a suitable window give an orthonormal Wilson basis.
"""

import math

import numpy as np

from modframe import (GaborLattice, GridSpec, cover_sum, gram, make_tight_window, roundtrip_error,
                      sine_bump, wilson_bumps, wilson_system)
from modframe.probes import cosine_window, random_bandlimited

grid = GridSpec.centered(16, 256)

phi = make_tight_window(sine_bump(grid, 0.0), 0.5)
print("cover sum range   :", np.ptp(cover_sum(phi, 0.5)))
f = random_bandlimited(grid, np.random.default_rng(3))
print("roundtrip error   :", roundtrip_error(f, phi, GaborLattice.for_grid(grid, 0.5)))

atoms = wilson_system(cosine_window(grid), range(-4, 5), range(0, 6))
G = gram(atoms)
print(len(atoms), "Wilson atoms, Gram deviation", np.max(np.abs(G - np.eye(len(atoms)))))

# bumps supported in one unit cell
bumps, rep = wilson_bumps(sine_bump(grid, 0.0) * math.sqrt(2), 8)
print("bump Gram deviation :", rep.gram_deviation)
print("M1 surrogate values :", np.round(rep.m1_values, 4))
