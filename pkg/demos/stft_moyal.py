"""
STFT planes and the orthogonality relation
==========================================

The sampled STFT plane is tight for a normalized window, so inner products
of signals are reproduced by inner products of their planes.
"""

from modframe import GridSpec, gaussian, inner
from modframe.modspace import PlaneSpec, default_window, moyal_residual, mp_norm_stft, stft
from modframe.probes import chirp

grid = GridSpec.centered(8, 64)
psi = default_window(grid)
plane = PlaneSpec()

g = gaussian(grid, 1.0, 0.8)
c = chirp(grid)
V = stft(c, psi, plane)
print("plane shape       :", V.values.shape)
print("<chirp, gaussian> :", inner(c, g))
print("relative residual :", moyal_residual(c, g, psi, plane))

# a modulation-space norm read off the plane
for p in (1.0, 2.0, 4.0):
    print(f"p = {p}: {mp_norm_stft(c, psi, p, plane).value:.6f}")
