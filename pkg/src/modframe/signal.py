"""Periodic sampled signals and the elementary time-frequency operators.

A :class:`Signal` is a complex vector of ``L`` samples taken at
``t0 + j*dx``.  Every operator treats it as one period of a function of
period ``P = L*dx``.  Translation is ``(T_tau f)(x) = f(x - tau)`` and
modulation is ``(M_y f)(x) = exp(-2*pi*i*y*x) f(x)`` (note the minus sign).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument

_INT_TOL = 1e-9


def _near_int(x: float, tol: float = _INT_TOL) -> bool:
    return abs(x - round(x)) <= tol * max(1.0, abs(x))


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: ``L`` samples, spacing ``dx``, origin ``t0``."""

    L: int
    dx: float
    t0: float = 0.0

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise InvalidArgument(f"grid needs an integer L >= 2, got {self.L!r}")
        if not (math.isfinite(self.dx) and self.dx > 0):
            raise InvalidArgument(f"grid spacing must be positive, got dx={self.dx!r}")
        if not math.isfinite(self.t0):
            raise InvalidArgument(f"grid origin must be finite, got t0={self.t0!r}")
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def period(self) -> float:
        return self.L * self.dx

    @property
    def samples_per_unit(self) -> int | None:
        """``1/dx`` when it is an integer, else ``None``."""
        s = 1.0 / self.dx
        return int(round(s)) if _near_int(s) else None

    def times(self) -> np.ndarray:
        return self.t0 + self.dx * np.arange(self.L)

    def to_dict(self) -> dict:
        return {"L": self.L, "dx": self.dx, "t0": self.t0}

    @classmethod
    def centered(cls, period: int = 64, samples_per_unit: int = 1024) -> "GridSpec":
        """Grid covering ``[-P/2, P/2)`` with ``s`` samples per time unit."""
        return cls(L=period * samples_per_unit, dx=1.0 / samples_per_unit,
                   t0=-period / 2)


@dataclass(frozen=True, eq=False)
class Signal:
    """Immutable sampled signal on a :class:`GridSpec`.

    ``notes`` carries non-fatal status flags, e.g. ``"nonperiodic-modulation"``.
    """

    samples: np.ndarray
    grid: GridSpec
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        x = np.array(self.samples, dtype=complex)
        if x.ndim != 1 or x.shape[0] != self.grid.L:
            raise InvalidArgument(
                f"expected {self.grid.L} samples, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise InvalidArgument("signal samples must be finite")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.samples, other.samples)

    __hash__ = object.__hash__

    # convenience accessors
    L = property(lambda self: self.grid.L)
    dx = property(lambda self: self.grid.dx)
    t0 = property(lambda self: self.grid.t0)
    period = property(lambda self: self.grid.period)

    def times(self) -> np.ndarray:
        return self.grid.times()

    def with_samples(self, samples, notes: tuple = ()) -> "Signal":
        return Signal(samples, self.grid, notes)

    def __add__(self, other: "Signal") -> "Signal":
        _check_same_grid(self, other)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other: "Signal") -> "Signal":
        _check_same_grid(self, other)
        return self.with_samples(self.samples - other.samples)

    def __mul__(self, other):
        if isinstance(other, Signal):
            _check_same_grid(self, other)
            return self.with_samples(self.samples * other.samples)
        return self.with_samples(self.samples * other)

    __rmul__ = __mul__

    def conj(self) -> "Signal":
        return self.with_samples(np.conj(self.samples))

    def norm(self) -> float:
        """Continuum-normalised L2 norm, ``sqrt(sum |f|^2 dx)``."""
        return lp_norm(self.samples, 2, self.dx)

    @classmethod
    def from_function(cls, grid: GridSpec, func) -> "Signal":
        return cls(func(grid.times()), grid)

    @classmethod
    def zeros(cls, grid: GridSpec) -> "Signal":
        return cls(np.zeros(grid.L, dtype=complex), grid)

    # serialization
    def to_json(self) -> str:
        d = self.grid.to_dict()
        d["samples"] = [[float(z.real), float(z.imag)] for z in self.samples]
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> "Signal":
        d = json.loads(text)
        missing = {"L", "dx", "t0", "samples"} - set(d)
        if missing:
            raise InvalidArgument(f"signal JSON lacks keys {sorted(missing)}")
        grid = GridSpec(d["L"], d["dx"], d["t0"])
        pairs = np.asarray(d["samples"], dtype=float)
        if pairs.shape != (grid.L, 2):
            raise InvalidArgument(
                f"signal JSON needs exactly L={grid.L} [re, im] pairs, got {pairs.shape}")
        return cls(pairs[:, 0] + 1j * pairs[:, 1], grid)

    def to_csv(self) -> str:
        g = self.grid
        lines = [f"# L={g.L} dx={g.dx!r} t0={g.t0!r}"]
        lines += [f"{z.real!r},{z.imag!r}" for z in self.samples.tolist()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "Signal":
        rows = text.strip().splitlines()
        header = rows[0].lstrip("#").split()
        meta = dict(item.split("=", 1) for item in header)
        grid = GridSpec(int(meta["L"]), float(meta["dx"]), float(meta["t0"]))
        vals = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
        if vals.shape != (grid.L, 2):
            raise InvalidArgument(f"CSV has {len(rows) - 1} rows, expected {grid.L}")
        return cls(vals[:, 0] + 1j * vals[:, 1], grid)


def _check_same_grid(f: Signal, g: Signal) -> None:
    if f.grid != g.grid:
        raise InvalidArgument(f"grid mismatch: {f.grid} vs {g.grid}")


def box_window(spec: GridSpec, a: float, b: float) -> Signal:
    """Indicator of ``[a, b)``, evaluated on the grid and wrapped periodically."""
    if not b > a:
        raise InvalidArgument(f"degenerate interval [{a}, {b})")
    P = spec.period
    if b - a > P * (1 + 1e-12):
        raise InvalidArgument(f"interval [{a}, {b}) is longer than the period {P}")
    t = spec.times()
    # position of each sample relative to a, reduced to [0, P)
    rel = np.mod(t - a, P)
    # samples that sit on a (up to rounding) belong to the interval
    rel = np.where(np.isclose(rel, P, rtol=0, atol=1e-9 * spec.dx), 0.0, rel)
    width = b - a
    inside = rel < width - 1e-9 * spec.dx
    return Signal(inside.astype(complex), spec)


def gaussian(spec: GridSpec, center: float = 0.0, width: float = 1.0,
             normalize: bool = True) -> Signal:
    """Periodised ``exp(-pi ((t - center)/width)^2)``, optionally unit L2 norm."""
    P = spec.period
    d = np.mod(spec.times() - center + P / 2, P) - P / 2
    g = np.exp(-np.pi * (d / width) ** 2)
    sig = Signal(g, spec)
    if normalize:
        sig = sig * (1.0 / sig.norm())
    return sig


def sine_bump(spec: GridSpec, start: float = 0.0) -> Signal:
    """``sin(pi (t - start))`` on ``[start, start + 1)``, zero elsewhere (periodised)."""
    box = box_window(spec, start, start + 1.0)
    rel = np.mod(spec.times() - start, spec.period)
    return Signal(np.sin(np.pi * rel) * box.samples.real, spec)


def translate(f: Signal, tau: float) -> Signal:
    """``(T_tau f)(x) = f(x - tau)``, periodic.

    Shifts that are whole multiples of ``dx`` rotate the samples; other
    shifts multiply the spectrum by the phase ramp of the delay.
    """
    shift = tau / f.dx
    # only snap shifts that are whole samples up to division rounding
    if _near_int(shift, 1e-13):
        return f.with_samples(np.roll(f.samples, int(round(shift)) % f.L))
    xi = np.fft.fftfreq(f.L, d=f.dx)
    spectrum = np.fft.fft(f.samples) * np.exp(-2j * np.pi * xi * tau)
    return f.with_samples(np.fft.ifft(spectrum))


def modulate(f: Signal, y: float) -> Signal:
    """``(M_y f)(x) = exp(-2 pi i y x) f(x)``.

    If ``y*P`` is not an integer the result is not periodic; it is still
    returned, flagged with the note ``"nonperiodic-modulation"``.
    """
    notes = f.notes
    if not _near_int(y * f.period):
        notes = notes + ("nonperiodic-modulation",)
    phase = np.exp(-2j * np.pi * y * f.times())
    return Signal(f.samples * phase, f.grid, notes)


def inner(f: Signal, g: Signal) -> complex:
    """Riemann-sum pairing ``sum f conj(g) dx``; conjugate-linear in ``g``."""
    _check_same_grid(f, g)
    return complex(np.vdot(g.samples, f.samples) * f.dx)


def _centered_start(L: int) -> int:
    return -(L // 2)


def fourier(f: Signal) -> Signal:
    """Samples of ``int f(t) exp(-2 pi i xi t) dt`` on the dual grid.

    The dual grid has spacing ``1/P`` and indices ``-floor(L/2) .. ceil(L/2)-1``.
    """
    return _dft(f, sign=-1)


def inverse_fourier(F: Signal, t0: float | None = None) -> Signal:
    """Inverse of :func:`fourier`; the output grid starts at ``t0``.

    By default the output grid is centred in the same way as :func:`fourier`.
    """
    return _dft(F, sign=+1, out_start=t0)


def _dft(f: Signal, sign: int, out_start: float | None = None) -> Signal:
    L, dx, t0 = f.L, f.dx, f.t0
    dxi = 1.0 / (L * dx)
    xi0 = _centered_start(L) * dxi if out_start is None else float(out_start)
    j = np.arange(L)
    pre = f.samples * np.exp(sign * 2j * np.pi * xi0 * j * dx)
    if sign < 0:
        core = np.fft.fft(pre)
    else:
        core = np.fft.ifft(pre) * L
    xi = xi0 + dxi * j
    out = dx * np.exp(sign * 2j * np.pi * xi * t0) * core
    return Signal(out, GridSpec(L, dxi, xi0))


def lp_norm(values, p: float, cell: float = 1.0) -> float:
    """``(sum |v|^p * cell)^(1/p)``, or ``max |v|`` for ``p = inf``."""
    if not (p >= 1):
        raise InvalidArgument(f"p must be >= 1, got {p}")
    if cell <= 0:
        raise InvalidArgument(f"cell measure must be positive, got {cell}")
    a = np.abs(np.asarray(values)).ravel()
    if a.size == 0:
        return 0.0
    if math.isinf(p):
        return float(a.max())
    top = a.max()
    if top == 0:
        return 0.0
    # scale first so large p does not overflow
    return float(top * (np.sum((a / top) ** p) * cell) ** (1.0 / p))
