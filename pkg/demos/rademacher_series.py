"""
Rademacher functions and their box coefficients
================================================

R_N is piecewise constant, so its coefficients are exact.  Only odd
multiples of 2^(N-1) survive, with magnitude 2/(pi |j|).
"""

import math

import numpy as np

from modframe import exact_fourier_coeff, khintchine_bounds, rademacher, rademacher_coeff_closed_form
from modframe.special import rademacher_box_norm

R3 = rademacher(3)
k = np.arange(-16, 17)
c = exact_fourier_coeff(R3, k)
for kk, cc in zip(k, c):
    if abs(cc) > 1e-14:
        print(f"k = {kk:4d}  |c| = {abs(cc):.6f}  closed form {abs(rademacher_coeff_closed_form(3, int(kk))):.6f}")

# the coefficient l4 norm does not depend on N
target = (2 / math.pi) * (math.pi ** 4 / 48) ** 0.25
for N in (1, 4, 8):
    print(f"N = {N}: l4 norm {rademacher_box_norm(N, 4.0, 4096):.9f}   limit {target:.9f}")

# Khintchine: exact averages over all sign patterns
cvec = np.array([1.0, -0.5, 0.25, 2.0])
for p in (1, 2, 4):
    print(f"p = {p}: ||sum c_n R_n||_p / ||c||_2 = {khintchine_bounds(cvec, p)[0]:.6f}")
