"""Test signals shared by the verification suite, tests and demos."""
from __future__ import annotations

import math

import numpy as np

from .signal import GridSpec, Signal, box_window, gaussian, inverse_fourier, fourier


def random_bandlimited(grid: GridSpec, rng: np.random.Generator, band: float = 8.0) -> Signal:
    """Unit-norm signal with random complex Fourier samples on ``|xi| <= band``."""
    spectrum = fourier(Signal.zeros(grid))
    xi = spectrum.times()
    keep = np.abs(xi) <= band
    vals = np.zeros(grid.L, dtype=complex)
    vals[keep] = rng.standard_normal(keep.sum()) + 1j * rng.standard_normal(keep.sum())
    f = inverse_fourier(spectrum.with_samples(vals), t0=grid.t0)
    f = Signal(f.samples, grid)
    return f * (1.0 / f.norm())


def chirp(grid: GridSpec, rate: float = 0.5, width: float = 2.0) -> Signal:
    """Gaussian envelope times ``exp(i pi rate t^2)``, unit norm."""
    t = grid.times()
    f = Signal(np.exp(-np.pi * (t / width) ** 2 + 1j * np.pi * rate * t ** 2), grid)
    return f * (1.0 / f.norm())


def cosine_window(grid: GridSpec) -> Signal:
    """``sqrt(2) cos(pi t)`` on ``[-1/2, 1/2)``.

    Real, even and unit-norm; its half-step shifts have squares summing to 2,
    which is what the Wilson construction needs.
    """
    box = box_window(grid, -0.5, 0.5).samples.real
    return Signal(math.sqrt(2) * np.cos(np.pi * grid.times()) * box, grid)


def smooth_probe(grid: GridSpec) -> Signal:
    """Narrow Gaussian centred at 0.4, effectively supported inside ``(0, 1)``.

    Off-centre on purpose: every ``R_n`` is odd about 1/2, so a probe even
    about 1/2 would pair to zero with all of them.
    """
    return gaussian(grid, center=0.4, width=0.2, normalize=False)
