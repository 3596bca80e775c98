"""Rademacher functions, exact Fourier integrals and Wilson-type bumps.

Everything involving Rademacher functions runs on
:class:`PiecewiseConstant`, whose Fourier integrals have closed forms, so no
quadrature error enters.  Sampled signals are compared against that exact
path through :func:`held_box_coefficients`.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, ResourceLimit, UnsupportedExponent
from .gabor import gram, reflect
from .signal import GridSpec, Signal, inner, lp_norm, modulate, translate

MAX_RADEMACHER_INDEX = 24
MAX_KHINTCHINE_TERMS = 14
MAX_DECAY_INDEX = 20


@dataclass(frozen=True)
class PiecewiseConstant:
    """``values[i]`` on ``[breakpoints[i], breakpoints[i+1])``, zero elsewhere."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if x.ndim != 1 or x.size < 2:
            raise InvalidArgument("need at least two breakpoints")
        if v.shape != (x.size - 1,):
            raise InvalidArgument(f"{x.size} breakpoints need {x.size - 1} values, got {v.shape}")
        if not np.all(np.diff(x) > 0):
            raise InvalidArgument("breakpoints must be strictly increasing")
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "breakpoints", x)
        object.__setattr__(self, "values", v)

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breakpoints, t, side="right") - 1
        ok = (idx >= 0) & (idx < self.values.size)
        out = np.zeros(t.shape, dtype=complex)
        out[ok] = self.values[idx[ok]]
        return out

    def restrict(self, a: float, b: float) -> "PiecewiseConstant | None":
        """The function times ``1_[a,b)``; ``None`` if that is identically zero."""
        x = self.breakpoints
        lo, hi = max(a, x[0]), min(b, x[-1])
        if hi <= lo:
            return None
        inner_pts = x[(x > lo) & (x < hi)]
        pts = np.concatenate(([lo], inner_pts, [hi]))
        mids = 0.5 * (pts[:-1] + pts[1:])
        return PiecewiseConstant(pts, self(mids))

    def sample(self, grid: GridSpec) -> Signal:
        """Periodised samples on ``grid`` (left-closed pieces)."""
        P = grid.period
        t = grid.times()
        lo = math.floor((self.breakpoints[0] - t[-1]) / P)
        hi = math.ceil((self.breakpoints[-1] - t[0]) / P)
        out = np.zeros(grid.L, dtype=complex)
        for m in range(lo, hi + 1):
            out += self(t + m * P)
        return Signal(out, grid)

    def to_json(self) -> str:
        return json.dumps({"breakpoints": self.breakpoints.tolist(),
                           "values": [[z.real, z.imag] for z in self.values.tolist()]})

    @classmethod
    def from_json(cls, text: str) -> "PiecewiseConstant":
        d = json.loads(text)
        v = np.asarray(d["values"], dtype=float).reshape(-1, 2)
        return cls(d["breakpoints"], v[:, 0] + 1j * v[:, 1])


def rademacher(n: int) -> PiecewiseConstant:
    """``R_n = sign(sin(2^n pi x))`` on ``[0, 1)``: value ``(-1)^j`` on piece ``j``."""
    if n < 0:
        raise InvalidArgument(f"Rademacher index must be >= 0, got {n}")
    if n > MAX_RADEMACHER_INDEX:
        raise ResourceLimit(f"R_{n} needs 2^{n} pieces; limit is n <= {MAX_RADEMACHER_INDEX}")
    m = 1 << n
    x = np.arange(m + 1) / m
    v = np.where(np.arange(m) % 2, -1.0, 1.0)
    return PiecewiseConstant(x, v)


def _frac_phase(k: np.ndarray, x: np.ndarray) -> np.ndarray:
    # exp(2 pi i k x), reducing k*x mod 1 first so dyadic breakpoints stay exact
    kx = np.multiply.outer(k.astype(float), x)
    return np.exp(2j * np.pi * (kx - np.round(kx)))


def exact_fourier_coeff(pc: PiecewiseConstant, k):
    """``int pc(t) exp(2 pi i k t) dt`` from the closed-form primitive.

    ``k`` may be an integer or an integer array.
    """
    scalar = np.isscalar(k)
    ks = np.atleast_1d(np.asarray(k, dtype=np.int64))
    x, v = pc.breakpoints, pc.values
    out = np.empty(ks.shape, dtype=complex)
    zero = ks == 0
    out[zero] = np.sum(v * np.diff(x))
    nz = ~zero
    if nz.any():
        kk = ks[nz]
        E = _frac_phase(kk, x)
        out[nz] = ((E[:, 1:] - E[:, :-1]) @ v) / (2j * np.pi * kk)
    return complex(out[0]) if scalar else out


def rademacher_coeff_closed_form(N: int, k: int) -> complex:
    """``-2/(pi i j)`` when ``k = j 2^(N-1)`` with ``j`` odd, otherwise 0."""
    if N < 1:
        raise InvalidArgument(f"closed form needs N >= 1, got {N}")
    if k == 0:
        return 0j
    step = 1 << (N - 1)
    if k % step:
        return 0j
    j = k // step
    if j % 2 == 0:
        return 0j
    return -2.0 / (math.pi * 1j * j)


def box_coefficients_exact(pc: PiecewiseConstant, n_cap: int = 512):
    """Exact ``<pc, M_n T_k 1_[0,1)>`` for every unit cell the support meets.

    Returns ``(entries, n)`` with one row per touched cell and
    ``n = -n_cap .. n_cap-1``.
    """
    if n_cap < 1:
        raise InvalidArgument(f"n_cap must be >= 1, got {n_cap}")
    n = np.arange(-n_cap, n_cap)
    rows = []
    for k in range(math.floor(pc.breakpoints[0]), math.ceil(pc.breakpoints[-1])):
        piece = pc.restrict(k, k + 1)
        if piece is not None:
            rows.append(exact_fourier_coeff(piece, n))
    if not rows:
        return np.zeros((1, n.size), dtype=complex), n
    return np.array(rows), n


def _dyadic_period(x: np.ndarray, limit: int) -> int | None:
    # every float is m / 2^e; the exponentials exp(2 pi i n x) repeat in n with period 2^e
    D = max(v.as_integer_ratio()[1] for v in x.tolist())
    return D if D <= limit else None


def exact_box_tail(pc: PiecewiseConstant, p: float, n_cap: int, limit: int = 1 << 16) -> float | None:
    """Exact ``l^p`` norm of the box coefficients with ``n >= n_cap`` or ``n < -n_cap``.

    On each unit cell ``c_n = A(n) / (2 pi i n)`` with ``A`` periodic of period
    ``D`` (the common dyadic denominator of the breakpoints), so the omitted
    sum splits into ``D`` Hurwitz zeta series.  Returns ``None`` when ``D``
    exceeds ``limit``.
    """
    from scipy.special import zeta

    total = 0.0
    for k in range(math.floor(pc.breakpoints[0]), math.ceil(pc.breakpoints[-1])):
        piece = pc.restrict(k, k + 1)
        if piece is None:
            continue
        D = _dyadic_period(piece.breakpoints, limit)
        if D is None or D * piece.breakpoints.size > (1 << 24):
            return None
        r = np.arange(D)
        E = _frac_phase(r, piece.breakpoints)
        A = np.abs((E[:, 1:] - E[:, :-1]) @ piece.values)
        # n >= n_cap: first n in each residue class
        first_pos = n_cap + (r - n_cap) % D
        # n <= -(n_cap + 1), written as n = -u: u = -n has residue (-r) mod D
        first_neg = (n_cap + 1) + (-r - (n_cap + 1)) % D
        z = zeta(p, first_pos / D) + zeta(p, first_neg / D)
        total += math.fsum((A ** p * z).tolist()) / (2 * math.pi * D) ** p
    return total ** (1 / p)


def rademacher_box_norm(N: int, p: float, j_cap: int = 4096) -> float:
    """``l^p`` norm of the exact coefficients of ``R_N`` at ``k = j 2^(N-1)``, ``0 < |j| <= j_cap``.

    ``R_N`` lives in one unit cell and its coefficients vanish off that
    sub-lattice, so this is its full box-coefficient norm up to the cut.
    """
    if not p > 1:
        raise UnsupportedExponent(f"need p > 1, got p={p}")
    if j_cap < 1:
        raise InvalidArgument(f"j_cap must be >= 1, got {j_cap}")
    j = np.concatenate([np.arange(-j_cap, 0), np.arange(1, j_cap + 1)])
    c = exact_fourier_coeff(rademacher(N), j * (1 << (N - 1)))
    return lp_norm(c, p, 1.0)


def rademacher_series_value(p: float, j_cap: int) -> float:
    """``(2/pi) (2 sum_{odd j <= j_cap} j^-p)^(1/p)``."""
    j = np.arange(1, j_cap + 1, 2, dtype=float)
    # sum smallest terms first
    return (2 / math.pi) * (2 * math.fsum((j[::-1]) ** -p)) ** (1 / p)


def rademacher_norm_ratio(N: int, p: float, j_cap: int = 4096) -> float:
    """Exact box-coefficient norm of ``R_N`` over the ``(2/pi)/j`` series value."""
    if not p > 1:
        raise UnsupportedExponent(f"need p > 1, got p={p}")
    if j_cap < 64:
        raise InvalidArgument(f"j_cap must be >= 64, got {j_cap}")
    if N < 1:
        raise InvalidArgument(f"N must be >= 1, got {N}")
    return rademacher_box_norm(N, p, j_cap) / rademacher_series_value(p, j_cap)


def held_box_coefficients(f: Signal, n_cap: int | None = None):
    """Box coefficients of the sample-and-hold interpolant of ``f``.

    Sample ``j`` is held on ``[t_j, t_j + dx)``, matching the left-closed
    indicator convention.  Integrating that interpolant exactly multiplies
    the discrete-sum coefficients by ``(exp(i theta) - 1)/(i theta)``,
    ``theta = 2 pi n dx``.
    """
    from .modspace import box_coefficients

    c = box_coefficients(f, n_cap)
    theta = 2 * np.pi * c.lattice.modulations * f.dx
    att = np.ones(theta.shape, dtype=complex)
    nz = theta != 0
    att[nz] = (np.exp(1j * theta[nz]) - 1) / (1j * theta[nz])
    return c.with_entries(c.entries * att)


def _pc_pairing(a: PiecewiseConstant, b: PiecewiseConstant) -> complex:
    """``int a conj(b)``."""
    x = np.union1d(a.breakpoints, b.breakpoints)
    mids = 0.5 * (x[:-1] + x[1:])
    return complex(np.sum(a(mids) * np.conj(b(mids)) * np.diff(x)))


def decay_sequence(f, n_max: int) -> np.ndarray:
    """``|<R_n, f>|`` for ``n = 1..n_max``, pairing over ``[0, 1)``.

    A :class:`Signal` is replaced by the piecewise-linear interpolant of its
    samples in ``[0, 1)``, held constant over the last cell, and integrated
    exactly against each ``R_n``; a
    :class:`PiecewiseConstant` is paired exactly.
    """
    if n_max > MAX_DECAY_INDEX:
        raise ResourceLimit(f"n_max={n_max} exceeds {MAX_DECAY_INDEX}")
    if isinstance(f, PiecewiseConstant):
        return np.array([abs(_pc_pairing(rademacher(n), f)) for n in range(1, n_max + 1)])
    t = f.times()
    u = np.mod(t, f.period)
    keep = u < 1
    order = np.argsort(u[keep])
    nodes = u[keep][order]
    vals = f.samples[keep][order]
    if nodes.size == 0:
        raise InvalidArgument("the grid has no samples in [0, 1)")
    if nodes[0] > 0:
        # value at 0 interpolated from the periodic samples
        v0 = (np.interp(0.0, t, f.samples.real, period=f.period)
              + 1j * np.interp(0.0, t, f.samples.imag, period=f.period))
        nodes, vals = np.concatenate(([0.0], nodes)), np.concatenate(([v0], vals))
    # f restricted to [0, 1) ends at its left limit, held from the last sample
    nodes, vals = np.append(nodes, 1.0), np.append(vals, vals[-1])
    out = np.empty(n_max)
    for n in range(1, n_max + 1):
        m = 1 << n
        x = np.union1d(nodes, np.arange(m + 1) / m)
        fx = np.interp(x, nodes, vals.real) + 1j * np.interp(x, nodes, vals.imag)
        mids = 0.5 * (x[:-1] + x[1:])
        sign = np.where(np.floor(mids * m).astype(np.int64) % 2, -1.0, 1.0)
        # trapezoid rule is exact for the linear interpolant on each piece
        val = np.sum(sign * np.diff(x) * 0.5 * np.conj(fx[:-1] + fx[1:]))
        out[n - 1] = abs(val)
    return out


def khintchine_bounds(c, p: float) -> tuple[float, float]:
    """Exact ``||sum c_n R_n||_{L^p[0,1]} / ||c||_2`` and the ``p = 2`` reference 1.

    The sum is constant on the ``2^N`` dyadic pieces, so the ``L^p`` norm is
    an exact average over them.
    """
    c = np.asarray(c, dtype=float)
    N = c.size
    if N > MAX_KHINTCHINE_TERMS:
        raise ResourceLimit(f"N={N} exceeds {MAX_KHINTCHINE_TERMS} terms")
    if not p >= 1:
        raise UnsupportedExponent(f"need p >= 1, got p={p}")
    norm2 = math.hypot(*c.tolist())
    if N == 0 or norm2 == 0:
        raise InvalidArgument("coefficient vector must be nonzero")
    m = np.arange(1 << N)
    # R_n on piece m of 2^N equals (-1)^floor(m / 2^(N-n))
    signs = np.stack([np.where((m >> (N - n)) & 1, -1.0, 1.0) for n in range(1, N + 1)], axis=1)
    if p == 2:
        return _khintchine_l2_exact(c, signs), 1.0
    s = signs @ c
    if math.isinf(p):
        value = float(np.max(np.abs(s)))
    else:
        value = (math.fsum(np.abs(s) ** p) / s.size) ** (1 / p)
    return value / norm2, 1.0


def _khintchine_l2_exact(c: np.ndarray, signs: np.ndarray) -> float:
    # floats are dyadic rationals: scale to integers and sum exactly
    ratios = [x.as_integer_ratio() for x in c.tolist()]
    den = max(d for _, d in ratios)
    ci = np.array([n * (den // d) for n, d in ratios], dtype=object)
    s = signs.astype(np.int64).astype(object) @ ci
    num = sum(int(v) * int(v) for v in s)
    ref = sum(int(v) * int(v) for v in ci) * s.size
    return math.sqrt(Fraction(num, ref))


@dataclass
class BumpReport:
    gram_deviation: float
    m1_values: list = field(default_factory=list)
    m1_sup_ratio: float = 0.0
    decay: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def wilson_bumps(phi: Signal, n_max: int, probe: Signal | None = None,
                 tol: float = 1e-10) -> tuple[list[Signal], BumpReport]:
    """``phi_n = c_n (M_n + (-1)^n M_{-n}) phi`` for ``n = 0..n_max``.

    ``phi`` must vanish outside ``[0, 1)``, be real and symmetric about 1/2,
    have unit norm and satisfy ``|phi(x)|^2 + |phi(x - 1/2)|^2 = 2`` on the
    grid, which makes the ``phi_n`` orthonormal.
    """
    from .gabor import cover_sum
    from .modspace import m1_surrogate

    t = phi.times()
    P = phi.period
    outside = (np.mod(t, P) >= 1) & (np.mod(t, P) < P)
    if np.max(np.abs(phi.samples[outside]), initial=0.0) > tol:
        raise InvalidArgument("phi must vanish outside [0, 1)")
    # symmetry about 1/2: phi(x) = phi(1 - x) = (T_1 reflect(phi))(x)
    asym = float(np.max(np.abs(phi.samples - translate(reflect(phi), 1.0).samples)))
    if asym > tol or np.max(np.abs(phi.samples.imag)) > tol:
        raise InvalidArgument(f"phi must be real and symmetric about 1/2: defect {asym:.3e}")
    spread = abs(phi.norm() - 1)
    if spread > tol:
        raise InvalidArgument(f"phi must have unit norm: defect {spread:.3e}")
    cover = cover_sum(phi, 0.5)
    defect = float(np.max(np.abs(cover - 2)))
    if defect > 1e-8:
        raise InvalidArgument(f"half-step cover sum of |phi|^2 is not 2: defect {defect:.3e}")

    bumps = []
    for n in range(n_max + 1):
        cn = 0.5 if n == 0 else math.sqrt(2) / 2
        sgn = -1.0 if n % 2 else 1.0
        bumps.append(Signal(cn * (modulate(phi, n).samples + sgn * modulate(phi, -n).samples),
                            phi.grid))
    G = gram(bumps)
    dev = float(np.max(np.abs(G - np.eye(len(bumps)))))
    m1 = [m1_surrogate(b) for b in bumps]
    if probe is None:
        probe = Signal(np.where((t >= 0) & (t < 1), t, 0.0), phi.grid)
    decay = [abs(inner(b, probe)) for b in bumps]
    report = BumpReport(dev, m1, max(m1) / m1[0], decay)
    return bumps, report
