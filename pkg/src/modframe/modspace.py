"""Short-time Fourier transform and discrete modulation-space norms.

Two surrogates for the ``M^p`` norm are provided:

* :func:`mp_norm_stft` integrates ``|V_psi f|^p`` over a sampled
  time-frequency plane;
* :func:`mp_norm_box` takes the ``l^p`` norm of the coefficients of ``f``
  against the box system ``M_n T_k 1_[0,1)``, which is an orthonormal basis.
  This is the canonical surrogate used throughout the package.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, UnsupportedExponent
from .gabor import CoeffGrid, GaborLattice, analyze
from .signal import GridSpec, Signal, _near_int, box_window, fourier, gaussian, inner, lp_norm


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


@dataclass(frozen=True)
class NormReport:
    p: float
    p_conj: float
    value: float
    method: str
    truncation_tail: float = 0.0

    def to_dict(self) -> dict:
        return {"p": self.p, "p_conj": self.p_conj, "value": self.value,
                "method": self.method, "truncation_tail": self.truncation_tail}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class PlaneSpec:
    """Sampling of the time-frequency plane.

    Time shifts run over one period in steps of ``x_step``; frequencies are
    ``j * w_step`` for ``-w_max <= j * w_step < w_max``.  ``w_max=None``
    means ``1/(4 dx)``.
    """

    x_step: float = 0.125
    w_step: float = 0.125
    w_max: float | None = None

    def resolve(self, grid: GridSpec) -> tuple[np.ndarray, np.ndarray, int]:
        if not _near_int(self.x_step / grid.dx):
            raise InvalidArgument(f"x_step={self.x_step} is not a multiple of dx={grid.dx}")
        nx = grid.period / self.x_step
        if not _near_int(nx):
            raise InvalidArgument(f"x_step={self.x_step} does not divide the period")
        q = 1.0 / (self.w_step * grid.dx)
        if not _near_int(q):
            raise InvalidArgument(f"1/(w_step*dx) must be an integer, got {q}")
        q = int(round(q))
        w_max = 1.0 / (4 * grid.dx) if self.w_max is None else self.w_max
        j = np.arange(math.ceil(-w_max / self.w_step - 1e-9),
                      math.ceil(w_max / self.w_step - 1e-9))
        if j.size > q:
            raise InvalidArgument("frequency range aliases: too many frequency samples")
        xs = grid.t0 + self.x_step * np.arange(int(round(nx)))
        return xs, j * self.w_step, q


@dataclass(frozen=True)
class StftGrid:
    """``values[i, j] = V_psi f(x0 + i dx_tf, w0 + j dw_tf)``."""

    values: np.ndarray
    dx_tf: float
    dw_tf: float
    x0: float
    w0: float

    @property
    def cell(self) -> float:
        return self.dx_tf * self.dw_tf

    def to_csv(self) -> str:
        lines = [f"# dx={self.dx_tf!r} dw={self.dw_tf!r} x0={self.x0!r} w0={self.w0!r}"]
        for i, row in enumerate(self.values):
            for j, z in enumerate(row.tolist()):
                lines.append(f"{i},{j},{z.real!r},{z.imag!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "StftGrid":
        rows = text.strip().splitlines()
        meta = dict(item.split("=", 1) for item in rows[0].lstrip("#").split())
        data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]]).reshape(-1, 4)
        shape = (int(data[:, 0].max()) + 1, int(data[:, 1].max()) + 1) if data.size else (0, 0)
        vals = np.zeros(shape, dtype=complex)
        vals[data[:, 0].astype(int), data[:, 1].astype(int)] = data[:, 2] + 1j * data[:, 3]
        return cls(vals, float(meta["dx"]), float(meta["dw"]), float(meta["x0"]), float(meta["w0"]))


def default_window(grid: GridSpec) -> Signal:
    """Unit-norm periodised Gaussian of width 1 centred at 0.

    Its effective support (about 6 time units) stays within ``P/8`` for the
    default 64-unit period.
    """
    return gaussian(grid, center=0.0, width=1.0)


def stft(f: Signal, psi: Signal, plane: PlaneSpec = PlaneSpec()) -> StftGrid:
    """``V_psi f(x, w) = <f, M_w T_x psi>`` on the sampled plane."""
    if f.grid != psi.grid:
        raise InvalidArgument(f"grid mismatch: {f.grid} vs {psi.grid}")
    npsi = psi.norm()
    if abs(npsi - 1) > 1e-8:
        raise InvalidArgument(f"window must have unit L2 norm, measured {npsi!r}")
    xs, ws, q = plane.resolve(f.grid)
    if f.L % q:
        raise InvalidArgument(f"fold length {q} does not divide L={f.L}")
    j = np.rint(ws / plane.w_step).astype(int)
    # exp(2 pi i w t_m) = exp(2 pi i w t0) exp(2 pi i j (m mod q) / q)
    phase = f.dx * q * np.exp(2j * np.pi * ws * f.t0)
    step = int(round(plane.x_step / f.dx))
    pconj = np.conj(psi.samples)
    if not _near_int(f.t0 / f.dx):
        raise InvalidArgument("stft needs t0 to be a multiple of dx")
    # T_x psi is a rotation by x/dx samples
    base = int(round(-f.t0 / f.dx))
    out = np.empty((xs.size, ws.size), dtype=complex)
    for i in range(xs.size):
        shifted = np.roll(pconj, i * step - base)
        h = f.samples * shifted
        h = h.reshape(-1, q).sum(axis=0)
        out[i] = np.fft.ifft(h)[j % q] * phase
    return StftGrid(out, plane.x_step, plane.w_step, float(xs[0]), float(ws[0]))


def mp_norm_stft(f: Signal, psi: Signal, p: float,
                 plane: PlaneSpec = PlaneSpec()) -> NormReport:
    """``||V_psi f||_{L^p}`` over the sampled plane.

    The tail estimate is the ``L^p`` mass of the two outermost frequency
    columns; the time direction is periodic and has no boundary.
    """
    V = stft(f, psi, plane)
    value = lp_norm(V.values, p, V.cell)
    edge = np.concatenate([V.values[:, 0], V.values[:, -1]])
    tail = lp_norm(edge, p, V.cell)
    return NormReport(p, conjugate_exponent(p), value, "stft", tail)


def box_lattice(grid: GridSpec, n_cap: int | None = None) -> GaborLattice:
    s = grid.samples_per_unit
    if s is None:
        raise InvalidArgument(f"box coefficients need integer 1/dx, got dx={grid.dx}")
    if not _near_int(grid.period):
        raise InvalidArgument(f"box coefficients need an integer period, got {grid.period}")
    if n_cap is None:
        n_cap = s // 2
    if n_cap < 1:
        raise InvalidArgument(f"n_cap must be >= 1, got {n_cap}")
    if n_cap > s // 2:
        raise InvalidArgument(f"n_cap={n_cap} exceeds the grid bandwidth s/2={s // 2}")
    return GaborLattice.for_grid(grid, 1.0, n_cap)


def box_coefficients(f: Signal, n_cap: int | None = None) -> CoeffGrid:
    """``<f, M_n T_k 1_[0,1)>`` for ``k`` over the period, ``-n_cap <= n < n_cap``."""
    lat = box_lattice(f.grid, n_cap)
    return analyze(f, box_window(f.grid, 0.0, 1.0), lat)


def _tail_estimate(entries: np.ndarray, n: np.ndarray, p: float, n_cap: int) -> float:
    # rows decay like C/|n|; C is read off the upper half of the range
    upper = np.abs(n) >= max(1, n_cap // 2)
    if not upper.any():
        return 0.0
    scale = float(np.max(np.abs(entries[:, upper]) * np.abs(n[upper])))
    return scale * ((p - 1) * n_cap ** (p - 1)) ** (-1.0 / p)


def mp_norm_box(f, p: float, n_cap: int | None = None) -> NormReport:
    """``l^p`` norm of the box-system coefficients of ``f``.

    ``f`` may be a :class:`Signal` (coefficients by discrete sums) or a
    :class:`~modframe.special.PiecewiseConstant` (coefficients integrated
    exactly).  ``n_cap`` defaults to half the grid bandwidth for signals
    and to 512 for piecewise-constant input.

    ``value`` covers ``-n_cap <= n < n_cap`` only.  ``truncation_tail`` is
    the ``l^p`` norm of the omitted coefficients: exact for piecewise-constant
    input with dyadic breakpoints, otherwise a ``C/|n|`` decay estimate.
    """
    if not (1 < p < math.inf):
        raise UnsupportedExponent(f"box norm is defined for 1 < p < inf, got p={p}")
    from .special import PiecewiseConstant, box_coefficients_exact, exact_box_tail

    tail = None
    if isinstance(f, PiecewiseConstant):
        n_cap = 512 if n_cap is None else n_cap
        entries, n = box_coefficients_exact(f, n_cap)
        tail = exact_box_tail(f, p, n_cap)
    else:
        c = box_coefficients(f, n_cap)
        entries, n = c.entries, c.lattice.modulations
        n_cap = -c.lattice.n_min
    value = lp_norm(entries, p, 1.0)
    if tail is None:
        tail = _tail_estimate(entries, n, p, n_cap)
    return NormReport(p, conjugate_exponent(p), value, "box", tail)


def m1_surrogate(phi: Signal, n_cap: int | None = None) -> float:
    """``l^1`` norm of the box coefficients, the package's stand-in for ``M^1``."""
    return box_coefficients(phi, n_cap).norm(1)


def plane_pairing(Vf: StftGrid, Vg: StftGrid) -> complex:
    return complex(np.vdot(Vg.values, Vf.values) * Vf.cell)


def moyal_residual(f: Signal, g: Signal, psi: Signal | None = None,
                   plane: PlaneSpec = PlaneSpec()) -> float:
    """``|<f, g> - <V f, V g>| / |<f, g>|``."""
    psi = default_window(f.grid) if psi is None else psi
    ref = inner(f, g)
    if ref == 0:
        raise InvalidArgument("companion is orthogonal to f; relative residual undefined")
    got = plane_pairing(stft(f, psi, plane), stft(g, psi, plane))
    return abs(ref - got) / abs(ref)


@dataclass(frozen=True)
class InvarianceReport:
    embed: float
    fourier2: float
    moyal: float
    product: float
    product_bound: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def passed(self) -> dict:
        return {"embed": self.embed <= 1 + 1e-12,
                "fourier2": abs(self.fourier2 - 1) <= 1e-6,
                "moyal": self.moyal <= 1e-3,
                "product": self.product <= self.product_bound}


def invariance_suite(f: Signal, phi: Signal, p: float, q: float,
                     g: Signal | None = None, psi: Signal | None = None,
                     plane: PlaneSpec = PlaneSpec(),
                     product_bound: float = 10.0) -> InvarianceReport:
    """Embedding, Fourier-invariance, Moyal and product ratios for ``f``.

    ``g`` is the Moyal companion (defaults to ``f``); ``phi`` is the
    multiplier for the product estimate.
    """
    if not (1 < p <= q < math.inf):
        raise UnsupportedExponent(f"need 1 < p <= q < inf, got p={p}, q={q}")
    embed = mp_norm_box(f, q).value / mp_norm_box(f, p).value
    fourier2 = mp_norm_box(fourier(f), 2).value / mp_norm_box(f, 2).value
    moyal = moyal_residual(f, f if g is None else g, psi, plane)
    product = mp_norm_box(f * phi, p).value / (m1_surrogate(phi) * mp_norm_box(f, p).value)
    return InvarianceReport(embed, fourier2, moyal, product, product_bound)
