"""Gabor systems ``M_n T_{alpha k} w`` with integer modulations on a grid.

Coefficients are computed by folding: because every modulation index is an
integer and the grid has an integer number ``s`` of samples per time unit,
``exp(2 pi i n t_j)`` depends only on ``j mod s``.  Each row of the
coefficient grid is then one length-``s`` FFT of the folded product
``f * conj(T_{alpha k} w)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .signal import GridSpec, Signal, _near_int, modulate, translate, lp_norm


@dataclass(frozen=True)
class GaborLattice:
    """Time step ``alpha``, ``k_count`` shifts, modulations ``n_min..n_max``."""

    alpha: float
    n_min: int
    n_max: int
    k_count: int

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidArgument(f"alpha must be positive, got {self.alpha}")
        if self.n_max < self.n_min:
            raise InvalidArgument(f"empty modulation range [{self.n_min}, {self.n_max}]")
        if self.k_count < 1:
            raise InvalidArgument(f"k_count must be >= 1, got {self.k_count}")

    @property
    def n_count(self) -> int:
        return self.n_max - self.n_min + 1

    @property
    def modulations(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    @classmethod
    def for_grid(cls, grid: GridSpec, alpha: float = 1.0,
                 n_cap: int | None = None) -> "GaborLattice":
        """Lattice tiling the grid's period with modulations ``-n_cap..n_cap-1``.

        ``n_cap`` defaults to ``s/2`` so the modulations cover the grid
        bandwidth exactly once.
        """
        s = grid.samples_per_unit
        if s is None:
            raise InvalidArgument(f"1/dx must be an integer, got dx={grid.dx}")
        if n_cap is None:
            n_cap = s // 2
        k = grid.period / alpha
        if not _near_int(k):
            raise InvalidArgument(f"alpha={alpha} does not divide the period {grid.period}")
        return cls(alpha, -int(n_cap), int(n_cap) - 1, int(round(k)))

    def validate(self, grid: GridSpec) -> int:
        """Check compatibility with ``grid``; return the samples per unit."""
        s = grid.samples_per_unit
        if s is None:
            raise InvalidArgument(f"1/dx must be an integer, got dx={grid.dx}")
        if not _near_int(self.alpha / grid.dx):
            raise InvalidArgument(f"alpha={self.alpha} is not a multiple of dx={grid.dx}")
        if not math.isclose(self.alpha * self.k_count, grid.period, rel_tol=1e-12):
            raise InvalidArgument(
                f"alpha*k_count={self.alpha * self.k_count} != period {grid.period}")
        if self.n_count > s or max(abs(self.n_min), abs(self.n_max)) > s // 2:
            raise InvalidArgument(
                f"modulations [{self.n_min}, {self.n_max}] alias on a grid with "
                f"{s} samples per unit")
        return s


@dataclass(frozen=True)
class CoeffGrid:
    """Coefficients ``entries[k, n - n_min]`` on a :class:`GaborLattice`."""

    entries: np.ndarray
    lattice: GaborLattice

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        shape = (self.lattice.k_count, self.lattice.n_count)
        if e.shape != shape:
            raise InvalidArgument(f"coefficient shape {e.shape} != lattice shape {shape}")
        if not np.all(np.isfinite(e)):
            raise InvalidArgument("coefficients must be finite")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def at(self, k: int, n: int) -> complex:
        return complex(self.entries[k, n - self.lattice.n_min])

    def with_entries(self, entries) -> "CoeffGrid":
        return CoeffGrid(entries, self.lattice)

    def norm(self, p: float) -> float:
        return lp_norm(self.entries, p, 1.0)

    def to_csv(self) -> str:
        lat = self.lattice
        lines = [f"# alpha={lat.alpha!r} n_min={lat.n_min} n_max={lat.n_max} "
                 f"k_count={lat.k_count}"]
        for k, row in enumerate(self.entries.tolist()):
            for n, z in zip(range(lat.n_min, lat.n_max + 1), row):
                lines.append(f"{k},{n},{z.real!r},{z.imag!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "CoeffGrid":
        rows = text.strip().splitlines()
        meta = dict(item.split("=", 1) for item in rows[0].lstrip("#").split())
        lat = GaborLattice(float(meta["alpha"]), int(meta["n_min"]), int(meta["n_max"]),
                           int(meta["k_count"]))
        e = np.zeros((lat.k_count, lat.n_count), dtype=complex)
        for r in rows[1:]:
            k, n, re, im = r.split(",")
            e[int(k), int(n) - lat.n_min] = float(re) + 1j * float(im)
        return cls(e, lat)


def _fold(x: np.ndarray, s: int) -> np.ndarray:
    return x.reshape(-1, s).sum(axis=0)


def analyze(f: Signal, w: Signal, lat: GaborLattice) -> CoeffGrid:
    """``entries[k, n] = <f, M_n T_{alpha k} w>``."""
    if f.grid != w.grid:
        raise InvalidArgument(f"grid mismatch: {f.grid} vs {w.grid}")
    s = lat.validate(f.grid)
    step = int(round(lat.alpha / f.dx))
    n = lat.modulations
    # exp(2 pi i n t_j) = exp(2 pi i n t0) exp(2 pi i n m / s), m = j mod s
    phase = f.dx * s * np.exp(2j * np.pi * n * f.t0)
    wconj = np.conj(w.samples)
    K = lat.k_count
    start, span = _support_span(w.samples)
    if span * K <= 8 * f.L:
        # short window: gather its support for every shift at once
        offs = start + step * np.arange(K)
        idx = (offs[:, None] + np.arange(span)) % f.L
        h = f.samples[idx] * wconj[idx[0]]
        m = -(-span // s)
        hp = np.zeros((K, m * s), dtype=complex)
        hp[:, :span] = h
        # column r of the fold holds grid indices congruent to offs + r mod s
        cols = (offs[:, None] + np.arange(s)) % s
        folded = np.empty((K, s), dtype=complex)
        folded[np.arange(K)[:, None], cols] = hp.reshape(K, m, s).sum(axis=1)
        out = np.fft.ifft(folded, axis=1)[:, n % s] * phase
    else:
        out = np.empty((K, lat.n_count), dtype=complex)
        for k in range(K):
            h = _fold(f.samples * np.roll(wconj, k * step), s)
            out[k] = np.fft.ifft(h)[n % s] * phase
    return CoeffGrid(out, lat)


def synthesize(c: CoeffGrid, w: Signal) -> Signal:
    """``sum_{k,n} c[k, n] M_n T_{alpha k} w`` on the window's grid."""
    lat = c.lattice
    s = lat.validate(w.grid)
    step = int(round(lat.alpha / w.dx))
    n = lat.modulations
    reps = w.L // s
    acc = np.zeros(w.L, dtype=complex)
    a = np.zeros(s, dtype=complex)
    tw = np.exp(-2j * np.pi * n * w.t0)
    for k in range(lat.k_count):
        a[:] = 0
        a[n % s] = c.entries[k] * tw
        u = np.fft.fft(a)
        acc += np.roll(w.samples, k * step) * np.tile(u, reps)
    return Signal(acc, w.grid)


def cover_sum(w: Signal, alpha: float) -> np.ndarray:
    """``sum_k |w(x - alpha k)|^2`` over one period of shifts."""
    k = w.period / alpha
    if not _near_int(k):
        raise InvalidArgument(f"alpha={alpha} does not divide the period {w.period}")
    sq = np.abs(w.samples) ** 2
    total = np.zeros(w.L)
    for i in range(int(round(k))):
        total += np.abs(translate(Signal(sq, w.grid), i * alpha).samples)
    return total


def make_tight_window(bump: Signal, alpha: float) -> Signal:
    """Normalise ``bump`` so its ``alpha``-shifted squares sum to one.

    ``phi = bump / sqrt(sum_k bump(x - alpha k)^2)``.  With integer
    modulations and a bump supported on an interval of length at most 1,
    the Gabor system of ``phi`` is a tight frame with bound 1.
    """
    if not 0 < alpha < 1:
        raise InvalidArgument(f"painless construction needs 0 < alpha < 1, got {alpha}")
    if np.any(bump.samples.real < -1e-12) or np.any(np.abs(bump.samples.imag) > 1e-12):
        raise InvalidArgument("bump must be real and non-negative")
    if support_length(bump) > 1 + 1e-12:
        raise InvalidArgument(
            f"bump support has length {support_length(bump)}, painless case needs <= 1")
    denom = cover_sum(bump, alpha)
    bad = np.flatnonzero(denom < 1e-12)
    if bad.size:
        t = bump.times()[bad[0]]
        raise InvalidArgument(f"shifts of the bump leave a gap at t={t!r}")
    return bump.with_samples(bump.samples / np.sqrt(denom))


def _support_span(x: np.ndarray, tol: float = 0.0) -> tuple[int, int]:
    """``(start, length)`` of the shortest cyclic index run holding ``|x| > tol``."""
    nz = np.abs(x) > tol
    if not nz.any():
        return 0, 0
    if nz.all():
        return 0, x.size
    first = int(np.flatnonzero(nz)[0])
    z = np.roll(~nz, -first)  # begins on a support sample
    edges = np.diff(np.concatenate(([0], z.astype(np.int8), [0])))
    begins, ends = np.flatnonzero(edges == 1), np.flatnonzero(edges == -1)
    i = int(np.argmax(ends - begins))
    # support starts right after the longest zero run
    return (first + int(ends[i])) % x.size, x.size - int(ends[i] - begins[i])


def support_length(f: Signal, tol: float = 0.0) -> float:
    """Length of the shortest periodic interval holding all samples above ``tol``."""
    return _support_span(f.samples, tol)[1] * f.dx


def roundtrip_error(f: Signal, w: Signal, lat: GaborLattice) -> float:
    """Relative L2 error of ``synthesize(analyze(f))`` against ``f``."""
    nf = f.norm()
    if nf == 0:
        raise InvalidArgument("roundtrip error is undefined for f = 0")
    back = synthesize(analyze(f, w, lat), w)
    return (back - f).norm() / nf


def wilson_system(g: Signal, k_range, n_range, tol: float = 1e-10) -> list[Signal]:
    """Wilson atoms ``c_n T_{k/2}(M_n + (-1)^(k+n) M_{-n}) g``.

    ``c_0 = 1/2`` and ``c_n = sqrt(2)/2`` otherwise.  For ``n = 0`` and odd
    ``k`` the formula gives the zero function; those slots are skipped, so
    the returned list enumerates ``k`` then ``n`` over the nonzero atoms.
    """
    ks = list(k_range)
    ns = list(n_range)
    if min(ns) < 0:
        raise InvalidArgument("Wilson modulation indices must be >= 0")
    _check_wilson_window(g, tol)
    atoms = []
    for k in ks:
        for n in ns:
            if n == 0 and k % 2:
                continue
            cn = 0.5 if n == 0 else math.sqrt(2) / 2
            sign = -1.0 if (k + n) % 2 else 1.0
            pair = modulate(g, n).samples + sign * modulate(g, -n).samples
            atoms.append(translate(Signal(cn * pair, g.grid), k / 2))
    return atoms


def reflect(f: Signal) -> Signal:
    """``x -> f(-x)`` on the grid; needs ``t0/dx`` to be an integer."""
    shift = f.t0 / f.dx
    if not _near_int(shift):
        raise InvalidArgument("reflection needs t0 to be a multiple of dx")
    j = np.arange(f.L)
    src = (-j - 2 * int(round(shift))) % f.L
    return f.with_samples(f.samples[src])


def _check_wilson_window(g: Signal, tol: float) -> None:
    sym = np.max(np.abs(g.samples - np.conj(reflect(g).samples)))
    if sym > tol:
        raise InvalidArgument(f"window is not conjugate-symmetric: defect {sym:.3e}")
    nrm = abs(g.norm() - 1.0)
    if nrm > tol:
        raise InvalidArgument(f"window must have unit L2 norm: defect {nrm:.3e}")
    # {M_n T_{k/2} g} tight with bound 2 <=> g/sqrt(2) reconstructs at alpha = 1/2
    lat = GaborLattice.for_grid(g.grid, alpha=0.5)
    probe = Signal(np.cos(2 * np.pi * g.times() / g.period) + 0.5, g.grid)
    err = roundtrip_error(probe, g * (1 / math.sqrt(2)), lat)
    if err > 1e-8:
        raise InvalidArgument(f"window does not generate a tight frame: roundtrip {err:.3e}")


def gram(atoms: list[Signal]) -> np.ndarray:
    """``G[i, j] = <atom_i, atom_j>``."""
    if not atoms:
        raise InvalidArgument("gram needs at least one atom")
    grid = atoms[0].grid
    for a in atoms[1:]:
        if a.grid != grid:
            raise InvalidArgument(f"grid mismatch: {a.grid} vs {grid}")
    A = np.stack([a.samples for a in atoms])
    return (A @ A.conj().T) * grid.dx


def sign_flip_ratio(f: Signal, w: Signal, lat: GaborLattice, trials: int,
                    seed: int) -> float:
    """Largest ``||synthesize(eps * analyze(f))|| / ||f||`` over random signs."""
    if trials < 1:
        raise InvalidArgument(f"trials must be >= 1, got {trials}")
    nf = f.norm()
    if nf == 0:
        raise InvalidArgument("sign-flip ratio is undefined for f = 0")
    c = analyze(f, w, lat)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        eps = rng.choice((-1.0, 1.0), size=c.entries.shape)
        worst = max(worst, synthesize(c.with_entries(eps * c.entries), w).norm() / nf)
    return worst
