"""Discrete Hilbert transform ``H_m = sum_{n != m} c_n / (m - n)`` on ``|n| <= M``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import zeta

from .errors import InvalidArgument, UnsupportedExponent
from .signal import lp_norm


@dataclass(frozen=True)
class BiSequence:
    """Values at indices ``-M..M``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).ravel()
        if v.size % 2 == 0:
            raise InvalidArgument(f"a two-sided sequence needs odd length, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise InvalidArgument("sequence entries must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def M(self) -> int:
        return self.values.size // 2

    def indices(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    def at(self, m: int) -> complex:
        return complex(self.values[m + self.M])

    @classmethod
    def one_hot(cls, M: int, m: int = 0) -> "BiSequence":
        v = np.zeros(2 * M + 1, dtype=complex)
        v[m + M] = 1
        return cls(v)

    def to_csv(self) -> str:
        return "".join(f"{m},{z.real!r},{z.imag!r}\n"
                       for m, z in zip(self.indices().tolist(), self.values.tolist()))

    @classmethod
    def from_csv(cls, text: str) -> "BiSequence":
        rows = [r for r in text.splitlines() if r.strip() and not r.startswith("#")]
        data = np.array([[float(x) for x in r.split(",")] for r in rows]).reshape(-1, 3)
        M = data.shape[0] // 2
        if not np.array_equal(data[:, 0], np.arange(-M, M + 1)):
            raise InvalidArgument("CSV rows must list m = -M..M in order")
        return cls(data[:, 1] + 1j * data[:, 2])


def _kernel(M: int) -> np.ndarray:
    m = np.arange(-2 * M, 2 * M + 1, dtype=float)
    k = np.zeros_like(m)
    nz = m != 0
    k[nz] = 1.0 / m[nz]
    return k


def hilbert_direct(c: BiSequence, block: int = 512) -> BiSequence:
    """Plain double sum, blocked over output rows."""
    n = c.indices()
    out = np.empty(n.size, dtype=complex)
    for start in range(0, n.size, block):
        m = n[start:start + block, None]
        d = (m - n[None, :]).astype(float)
        with np.errstate(divide="ignore"):
            w = np.where(d != 0, 1.0 / d, 0.0)
        out[start:start + block] = w @ c.values
    return BiSequence(out)


_checked = False


def discrete_hilbert(c: BiSequence) -> BiSequence:
    """Fast path: linear convolution with the ``1/m`` kernel, no wrap-around."""
    global _checked
    if not _checked:
        # one-time self-check of the fast path against the double sum
        probe = BiSequence(np.cos(np.arange(129)) + 1j * np.sin(0.3 * np.arange(129)))
        err = np.max(np.abs(_fast(probe) - hilbert_direct(probe).values))
        if err > 1e-10:
            raise RuntimeError(f"fast Hilbert path disagrees with direct sum by {err:.3e}")
        _checked = True
    return BiSequence(_fast(c))


def _fast(c: BiSequence) -> np.ndarray:
    k = _kernel(c.M)
    a = fftconvolve(c.values, k, mode="valid")
    # the kernel is odd, so H(c) = -reverse(H(reverse(c))); averaging both
    # evaluations makes that symmetry hold bit for bit
    b = fftconvolve(c.values[::-1], k, mode="valid")[::-1]
    return (a - b) / 2


def hilbert_ratio(c: BiSequence, p: float) -> float:
    """``||H c||_p / ||c||_p``."""
    nc = lp_norm(c.values, p)
    if nc == 0:
        raise InvalidArgument("input sequence is zero")
    return lp_norm(discrete_hilbert(c).values, p) / nc


def hilbert_norm_estimate(p: float, length: int, trials: int, seed: int) -> float:
    """Largest ratio over seeded complex Gaussian inputs on ``|n| <= length // 2``.

    Each trial draws from its own child of ``SeedSequence(seed)``, so results
    do not depend on evaluation order.
    """
    if not p > 1 or math.isinf(p):
        raise UnsupportedExponent(f"need 1 < p < inf, got p={p}")
    if trials < 1:
        raise InvalidArgument(f"trials must be >= 1, got {trials}")
    M = length // 2
    if M < 1:
        raise InvalidArgument(f"length must be >= 2, got {length}")
    best = 0.0
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        v = rng.standard_normal(2 * M + 1) + 1j * rng.standard_normal(2 * M + 1)
        best = max(best, hilbert_ratio(BiSequence(v), p))
    return best


def odd_probe(M: int) -> BiSequence:
    """``sign(n) / sqrt(|n|)``: slowly decaying, opposite signs on the two sides."""
    n = np.arange(-M, M + 1, dtype=float)
    v = np.zeros_like(n)
    nz = n != 0
    v[nz] = np.sign(n[nz]) / np.sqrt(np.abs(n[nz]))
    return BiSequence(v)


def one_hot_norm_corrected(M: int, p: float) -> float:
    """``||H delta_0||_p`` with the omitted tail ``2 sum_{m > M} m^-p`` added back.

    Converges to ``(2 zeta(p))^(1/p)``; ``pi/sqrt(3)`` at ``p = 2``.
    """
    if not p > 1:
        raise UnsupportedExponent(f"need p > 1, got p={p}")
    h = discrete_hilbert(BiSequence.one_hot(M)).values
    body = lp_norm(h, p) ** p
    return (body + 2 * float(zeta(p, M + 1))) ** (1 / p)
