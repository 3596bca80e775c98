"""The fifteen acceptance criteria, each at its stated tolerance.

Every test prints one PASS/FAIL line; the lines are collected again in the
"acceptance criteria" section of the pytest summary.
"""
import math

import numpy as np

from conftest import record
from modframe import (GaborLattice, GridSpec, Signal, box_window, cover_sum, decay_sequence,
                      exact_fourier_coeff, fourier, gaussian, gram, khintchine_bounds,
                      make_tight_window, mp_norm_box, rademacher, rademacher_coeff_closed_form,
                      rademacher_norm_ratio, roundtrip_error, sine_bump, translate, wilson_bumps,
                      wilson_system)
from modframe.config import RunConfig
from modframe.hilbert import (BiSequence, discrete_hilbert, hilbert_direct, hilbert_norm_estimate,
                              one_hot_norm_corrected)
from modframe.modspace import PlaneSpec, box_coefficients, default_window, moyal_residual
from modframe.probes import chirp, cosine_window, random_bandlimited, smooth_probe
from modframe.signal import lp_norm
from modframe.special import box_coefficients_exact, held_box_coefficients, rademacher_box_norm
from modframe.translates import (IntervalFamily, TranslateSet, completeness_residual,
                                 effective_density, spectral_notch, summability_partial,
                                 vanishing_products)
from modframe.verify import run_verify

SEED = 20240611


def criterion(n, name, ok, detail):
    record(f"criterion {n:2d} ({name}): {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_01_box_parseval(grid):
    rng = np.random.default_rng(SEED)
    lat = GaborLattice.for_grid(grid, 1.0)
    box = box_window(grid, 0.0, 1.0)
    dev, rt = 0.0, 0.0
    for _ in range(20):
        f = random_bandlimited(grid, rng)
        rep = mp_norm_box(f, 2)
        dev = max(dev, abs(rep.value - f.norm()) - (1e-8 + rep.truncation_tail))
        rt = max(rt, roundtrip_error(f, box, lat))
    criterion(1, "box Parseval", dev <= 0 and rt <= 1e-10,
              f"excess over 1e-8 + tail {dev:.2e}, roundtrip {rt:.2e}")


def test_02_rademacher_closed_form(grid):
    ks = np.arange(-1024, 1025)
    dev, quad = 0.0, 0.0
    for N in range(1, 9):
        pc = rademacher(N)
        cf = np.array([rademacher_coeff_closed_form(N, int(k)) for k in ks])
        dev = max(dev, np.max(np.abs(exact_fourier_coeff(pc, ks) - cf)))
        exact, _ = box_coefficients_exact(pc, 65)
        held = held_box_coefficients(pc.sample(grid), 65)
        quad = max(quad, np.max(np.abs(held.entries[0] - exact[0])))
    criterion(2, "Rademacher closed form", dev <= 1e-12 and quad <= 1e-4,
              f"closed-form deviation {dev:.2e}, sampled path {quad:.2e}")


def test_03_rademacher_norm_equivalence():
    worst = max(abs(rademacher_norm_ratio(N, p, 4096) - 1)
                for N in range(1, 9) for p in (1.5, 2.0, 3.0, 4.0))
    # re-derived from the series over odd j before use
    j = np.arange(1, 2_000_001, 2, dtype=float)
    brute = (2 / math.pi) * (2 * math.fsum(j[::-1] ** -4)) ** 0.25
    analytic = (2 / math.pi) * (math.pi ** 4 / 48) ** 0.25
    p4 = max(abs(rademacher_box_norm(N, 4.0, 4096) - analytic) for N in range(1, 9))
    ok = worst <= 1e-8 and p4 <= 1e-6 and abs(brute - analytic) <= 1e-12
    criterion(3, "Rademacher norm equivalence", ok,
              f"ratio deviation {worst:.2e}, p=4 value deviation {p4:.2e}, constant {analytic:.6f}")


def test_04_painless_tightness(grid):
    rng = np.random.default_rng(SEED + 4)
    phi = make_tight_window(sine_bump(grid, 0.0), 0.5)
    cover = np.max(np.abs(cover_sum(phi, 0.5) - 1))
    lat = GaborLattice.for_grid(grid, 0.5)
    rt = max(roundtrip_error(random_bandlimited(grid, rng), phi, lat) for _ in range(20))
    criterion(4, "painless tightness", rt <= 1e-10 and cover <= 1e-12,
              f"roundtrip {rt:.2e}, cover-sum deviation {cover:.2e}")


def test_05_wilson_orthonormality(grid):
    atoms = wilson_system(cosine_window(grid), range(-8, 9), range(0, 9))
    dev = np.max(np.abs(gram(atoms) - np.eye(len(atoms))))
    _, rep = wilson_bumps(sine_bump(grid, 0.0) * math.sqrt(2), 16)
    ok = dev <= 1e-8 and rep.gram_deviation <= 1e-8 and rep.m1_sup_ratio <= 4
    criterion(5, "Wilson orthonormality", ok,
              f"system Gram {dev:.2e} ({len(atoms)} atoms), bump Gram {rep.gram_deviation:.2e}, "
              f"sup ratio {rep.m1_sup_ratio:.3f}")


def test_06_moyal(grid):
    psi = default_window(grid)
    plane = PlaneSpec()
    g = gaussian(grid, 1.5, 1.3)
    c = chirp(grid)
    res = max(moyal_residual(g, g, psi, plane), moyal_residual(c, c, psi, plane),
              moyal_residual(c, g, psi, plane))
    criterion(6, "Moyal identity", res <= 1e-3, f"largest relative residual {res:.2e}")


def test_07_embedding_fourier(grid):
    rng = np.random.default_rng(SEED + 7)
    ps = (1.5, 2.0, 3.0)
    embed, four = 0.0, 0.0
    for _ in range(100):
        f = random_bandlimited(grid, rng)
        c = box_coefficients(f).entries
        n = {p: lp_norm(c, p) for p in ps}
        embed = max(embed, max(n[q] / n[p] for p in ps for q in ps if p <= q))
        four = max(four, abs(mp_norm_box(fourier(f), 2).value / n[2.0] - 1))
    criterion(7, "embedding and Fourier invariance", embed <= 1 + 1e-12 and four <= 1e-6,
              f"largest embed ratio {embed:.15f}, Fourier ratio deviation {four:.2e}")


def test_08_discrete_hilbert():
    rng = np.random.default_rng(SEED + 8)
    c = BiSequence(rng.standard_normal(4097) + 1j * rng.standard_normal(4097))
    diff = np.max(np.abs(discrete_hilbert(c).values - hilbert_direct(c).values))
    est = hilbert_norm_estimate(2.0, 4096, 1000, SEED)
    one = one_hot_norm_corrected(2048, 2.0)
    ok = diff <= 1e-10 and est <= math.pi + 1e-6 and abs(one - math.pi / math.sqrt(3)) <= 1e-6
    criterion(8, "discrete Hilbert transform", ok,
              f"fast vs direct {diff:.2e}, estimate {est:.4f}, one-hot {one:.9f}")


def test_09_summability():
    # a 256-unit period keeps shifted Gaussians from wrapping onto [0, 1)
    g = GridSpec.centered(256, 1024)
    S = summability_partial(gaussian(g), sine_bump(g, 0.0), (0.0, 1.0),
                            TranslateSet.integers(0, 64), 2.0, 64)
    tail = (S[63] - S[31]) / S[63]
    criterion(9, "summability", tail <= 1e-6, f"(S_64 - S_32)/S_64 = {tail:.2e}")


def test_10_vanishing_products(grid):
    psi = sine_bump(grid, 0.0)
    v = vanishing_products(gaussian(grid), psi, 2.0, 8)
    flat = vanishing_products(Signal(np.ones(grid.L), grid), psi, 2.0, 8)
    ratio, spread = v[8] / v[0], np.ptp(flat)
    criterion(10, "vanishing products", ratio <= 1e-6 and spread <= 1e-10,
              f"value(8)/value(0) {ratio:.2e}, constant control spread {spread:.2e}")


def test_11_completeness(grid):
    g = spectral_notch(gaussian(grid), 2.0, 3.0)
    probe = Signal(np.exp(2j * np.pi * 2.5 * grid.times()), grid)
    lam = TranslateSet(np.arange(-32, 32) * 0.5)
    res = min(completeness_residual(g, lam, N, probe) for N in (8, 16, 32, 64))
    member = completeness_residual(g, lam, 16, translate(g, lam.lambdas[0]))
    criterion(11, "spectral-gap completeness", res >= 0.99 and member <= 1e-10,
              f"smallest residual {res:.6f}, membership {member:.2e}")


def test_12_effective_density():
    rep = effective_density(TranslateSet.integers(1, 1025), IntervalFamily.dyadic(0, 10))
    rng = np.random.default_rng(SEED + 12)
    delta = 0.125
    lam = TranslateSet(delta * np.cumsum(1 + rng.integers(0, 4, size=500)))
    fam = tuple((delta * a, delta * (a + w)) for a, w in
                zip(range(1, 1000, 25), rng.integers(1, 20, size=40)))
    packed = effective_density(lam, IntervalFamily(fam))
    worst = max(packed.ratios)
    ok = abs(rep.witness_C - 1) <= 1e-9 and rep.family_divergent and worst <= 1 / delta
    criterion(12, "effective density", ok,
              f"dyadic witness {rep.witness_C}, divergent {rep.family_divergent}, "
              f"max ratio {worst} vs 1/delta {1 / delta}")


def test_13_khintchine():
    rng = np.random.default_rng(SEED + 13)
    two, lo, hi = [], math.inf, 0.0
    for _ in range(100):
        c = rng.standard_normal(int(rng.integers(1, 13)))
        two.append(khintchine_bounds(c, 2)[0])
        r = khintchine_bounds(c, 1)[0]
        lo, hi = min(lo, r), max(hi, r)
    ok = all(t == 1.0 for t in two) and lo >= 1 / math.sqrt(2) - 1e-9 and hi <= 1 + 1e-12
    criterion(13, "Khintchine", ok, f"p=2 all exactly 1: {all(t == 1.0 for t in two)}, "
              f"p=1 range [{lo:.6f}, {hi:.6f}]")


def test_14_decay(grid):
    d = decay_sequence(smooth_probe(grid), 12)
    criterion(14, "Rademacher decay", d[11] <= 1e-3 * d[0],
              f"|<R_12,f>| / |<R_1,f>| = {d[11] / d[0]:.2e}")


def test_15_determinism():
    cfg = RunConfig()
    a = run_verify(cfg).to_json()
    b = run_verify(cfg).to_json()
    criterion(15, "determinism", a == b, f"{len(a)} bytes, identical: {a == b}")
