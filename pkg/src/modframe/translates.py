"""Diagnostics for systems of translates ``{T_lambda g}``.

Finite sections are studied in the box-coefficient geometry: each translate
is mapped to its coefficient vector against ``M_n T_k 1_[0,1)`` and the
resulting columns are stacked into a synthesis matrix.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, UnsupportedExponent
from .modspace import box_coefficients, mp_norm_box
from .signal import Signal, box_window, fourier, inverse_fourier, translate

MAX_SECTION = 512


@dataclass(frozen=True)
class TranslateSet:
    """Strictly increasing shifts.  ``notes`` flags shifts outside ``(-P/2, P/2)``."""

    lambdas: np.ndarray
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float).ravel()
        if not np.all(np.isfinite(lam)):
            raise InvalidArgument("shifts must be finite")
        if lam.size > 1 and not np.all(np.diff(lam) > 0):
            raise InvalidArgument("shifts must be strictly increasing")
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)

    def __len__(self) -> int:
        return self.lambdas.size

    def check_period(self, period: float) -> "TranslateSet":
        """Copy with a ``"wraps-period"`` note if any shift leaves ``(-P/2, P/2)``."""
        if np.any(np.abs(self.lambdas) >= period / 2):
            return TranslateSet(self.lambdas, self.notes + ("wraps-period",))
        return self

    def positive(self) -> "TranslateSet":
        return TranslateSet(self.lambdas[self.lambdas > 0])

    def negative_side(self) -> "TranslateSet":
        """``-Lambda`` restricted to the positive axis, ready for :func:`effective_density`."""
        return TranslateSet(np.sort(-self.lambdas[self.lambdas < 0]))

    def to_text(self) -> str:
        return "".join(f"{v!r}\n" for v in self.lambdas.tolist())

    @classmethod
    def from_text(cls, text: str) -> "TranslateSet":
        vals = []
        for lineno, line in enumerate(text.splitlines(), 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                vals.append(float(s))
            except ValueError:
                raise InvalidArgument(f"line {lineno}: not a number: {s!r}") from None
        return cls(vals)

    @classmethod
    def integers(cls, start: int, stop: int) -> "TranslateSet":
        return cls(np.arange(start, stop, dtype=float))


def uniform_gap(lam: TranslateSet) -> float:
    """Smallest distance between consecutive shifts."""
    if len(lam) < 2:
        raise InvalidArgument("need at least two shifts")
    return float(np.min(np.diff(lam.lambdas)))


@dataclass
class SectionReport:
    N: int
    sigma_min: float
    sigma_max: float
    residuals: dict = field(default_factory=dict)

    @property
    def condition_ratio(self) -> float:
        return self.sigma_min / self.sigma_max if self.sigma_max > 0 else 0.0

    def to_dict(self) -> dict:
        return {"N": self.N, "sigma_min": self.sigma_min, "sigma_max": self.sigma_max,
                "condition_ratio": self.condition_ratio, "residuals": dict(self.residuals)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _coeff_vector(f: Signal, n_cap) -> np.ndarray:
    return box_coefficients(f, n_cap).entries.ravel()


def section_matrix(g: Signal, lam: TranslateSet, N: int, n_cap: int | None = None) -> np.ndarray:
    """Columns are the box-coefficient vectors of ``T_lambda_n g``, ``n < N``."""
    if N < 1 or N > len(lam):
        raise InvalidArgument(f"N={N} must lie in 1..{len(lam)}")
    if N > MAX_SECTION:
        raise InvalidArgument(f"N={N} exceeds the section limit {MAX_SECTION}")
    if not np.any(g.samples):
        raise InvalidArgument("generator g is identically zero")
    cols = [_coeff_vector(translate(g, lam.lambdas[i]), n_cap) for i in range(N)]
    return np.stack(cols, axis=1)


def section_spectrum(g: Signal, lam: TranslateSet, N: int,
                     n_cap: int | None = None) -> SectionReport:
    """Extreme singular values of the ``N``-column synthesis matrix."""
    A = section_matrix(g, lam, N, n_cap)
    sv = np.linalg.svd(A, compute_uv=False)
    # fewer rows than columns means a nontrivial kernel
    smin = float(sv[-1]) if A.shape[0] >= N else 0.0
    return SectionReport(N, smin, float(sv[0]))


def _orth_basis(A: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return U[:, :0]
    return U[:, s > rtol * s[0]]


def completeness_residual(g: Signal, lam: TranslateSet, N: int, f: Signal,
                          n_cap: int | None = None) -> float:
    """``||f - proj f|| / ||f||`` with the projection onto the first ``N`` translates."""
    b = _coeff_vector(f, n_cap)
    nb = np.linalg.norm(b)
    if nb == 0:
        raise InvalidArgument("probe f is identically zero")
    Q = _orth_basis(section_matrix(g, lam, N, n_cap))
    r = b - Q @ (Q.conj().T @ b)
    return float(np.linalg.norm(r) / nb)


def spectral_notch(g: Signal, lo: float, hi: float) -> Signal:
    """``g`` with its Fourier samples on ``[lo, hi]`` set to zero."""
    if not hi > lo:
        raise InvalidArgument(f"empty band [{lo}, {hi}]")
    G = fourier(g)
    xi = G.times()
    eps = 1e-9 * G.dx
    kill = (xi >= lo - eps) & (xi <= hi + eps)
    if not kill.any():
        raise InvalidArgument(f"band [{lo}, {hi}] holds no frequency samples")
    out = inverse_fourier(G.with_samples(np.where(kill, 0, G.samples)), t0=g.t0)
    return Signal(out.samples, g.grid)


def summability_partial(f: Signal, psi: Signal, interval: tuple, lam: TranslateSet,
                        p: float, N: int, n_cap: int | None = None) -> np.ndarray:
    """Partial sums ``S_K = sum_{n<=K} ||T_lambda_n f * psi * 1_[a,b)||^p`` for ``K = 1..N``."""
    if not p > 1:
        raise UnsupportedExponent(f"need p > 1, got p={p}")
    if N < 1 or N > len(lam):
        raise InvalidArgument(f"N={N} must lie in 1..{len(lam)}")
    if len(lam) >= 2 and not uniform_gap(lam) > 0:
        raise InvalidArgument("shift set is not uniformly discrete")
    a, b = interval
    cut = psi * box_window(f.grid, a, b)
    terms = np.empty(N)
    for i in range(N):
        h = translate(f, lam.lambdas[i]) * cut
        terms[i] = mp_norm_box(h, p, n_cap).value ** p if np.any(h.samples) else 0.0
    return np.cumsum(terms)


def vanishing_products(ghat: Signal, psi: Signal, p: float, k_max: int,
                       n_cap: int | None = None) -> np.ndarray:
    """``||ghat * T_k psi||`` in the box norm for ``k = 0..k_max``."""
    if not p > 1:
        raise UnsupportedExponent(f"need p > 1, got p={p}")
    out = np.empty(k_max + 1)
    for k in range(k_max + 1):
        h = ghat * translate(psi, k)
        out[k] = mp_norm_box(h, p, n_cap).value if np.any(h.samples) else 0.0
    return out


# families whose relative-length series is known to diverge
DIVERGENT_TEMPLATES = {"dyadic"}


@dataclass(frozen=True)
class IntervalFamily:
    """Half-open intervals ``(a, b]``, disjoint and increasing in ``(0, inf)``."""

    intervals: tuple
    template: str | None = None

    def __post_init__(self):
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        prev = 0.0
        for i, (a, b) in enumerate(iv):
            if not (a > 0 and b > a):
                raise InvalidArgument(f"interval {i} ({a}, {b}] must satisfy 0 < a < b")
            if a < prev:
                raise InvalidArgument(f"interval {i} ({a}, {b}] overlaps its predecessor")
            prev = b
        object.__setattr__(self, "intervals", iv)

    @classmethod
    def dyadic(cls, n_start: int, n_stop: int) -> "IntervalFamily":
        """``(2^n, 2^(n+1)]`` for ``n_start <= n < n_stop``."""
        return cls(tuple((2.0 ** n, 2.0 ** (n + 1)) for n in range(n_start, n_stop)), "dyadic")

    @classmethod
    def parse(cls, text: str) -> "IntervalFamily":
        """``"dyadic:N0:N1"`` or ``"a1,b1;a2,b2;..."``."""
        if text.startswith("dyadic:"):
            _, n0, n1 = text.split(":")
            return cls.dyadic(int(n0), int(n1))
        pairs = [tuple(map(float, chunk.split(","))) for chunk in text.split(";") if chunk.strip()]
        return cls(tuple(pairs))


@dataclass
class DensityReport:
    intervals: list
    ratios: list
    divergence_partial: float
    witness_C: float
    family_divergent: bool

    def to_dict(self) -> dict:
        return {"intervals": [list(iv) for iv in self.intervals], "ratios": list(self.ratios),
                "divergence_partial": self.divergence_partial, "witness_C": self.witness_C,
                "family_divergent": self.family_divergent}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def effective_density(lam: TranslateSet, family: IntervalFamily) -> DensityReport:
    """Hit ratios ``|(a,b] & Lambda+| / (b - a)`` over an interval family.

    Only the positive shifts are counted; run the mirrored set from
    :meth:`TranslateSet.negative_side` too and take the larger witness.
    """
    pos = lam.lambdas[lam.lambdas > 0]
    ratios, div = [], []
    for a, b in family.intervals:
        count = np.searchsorted(pos, b, side="right") - np.searchsorted(pos, a, side="right")
        ratios.append(float(count) / (b - a))
        div.append(((b - a) / a) ** 2)
    witness = min(ratios) if (ratios and pos.size) else 0.0
    return DensityReport(list(family.intervals), ratios, math.fsum(div), witness,
                         family.template in DIVERGENT_TEMPLATES)
