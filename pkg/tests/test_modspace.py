import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modframe import (GridSpec, InvalidArgument, PlaneSpec, Signal, UnsupportedExponent,
                      box_window, default_window, gaussian, inner, invariance_suite,
                      m1_surrogate, modulate, moyal_residual, mp_norm_box, mp_norm_stft,
                      rademacher, stft, translate)
from modframe.modspace import NormReport, StftGrid, conjugate_exponent
from modframe.probes import chirp, random_bandlimited

P4 = 0.7598356856515925  # brute-force series value, see test_special


@pytest.fixture(scope="module")
def mid():
    return GridSpec.centered(16, 64)


def test_conjugate_exponent():
    assert conjugate_exponent(2) == 2
    assert conjugate_exponent(1) == math.inf
    assert conjugate_exponent(math.inf) == 1
    assert math.isclose(1 / 3 + 1 / conjugate_exponent(3), 1)


def test_plane_resolution(mid):
    xs, ws, q = PlaneSpec().resolve(mid)
    assert xs.size == 128 and q == 512
    assert ws[0] == -16 and ws[-1] == 16 - 0.125
    with pytest.raises(InvalidArgument):
        PlaneSpec(x_step=0.1).resolve(mid)
    with pytest.raises(InvalidArgument):
        PlaneSpec(w_max=100).resolve(mid)


def test_stft_matches_definition(mid):
    f = chirp(mid)
    psi = default_window(mid)
    plane = PlaneSpec(0.5, 0.25, 2.0)
    V = stft(f, psi, plane)
    xs, ws, _ = plane.resolve(mid)
    for i in (0, 5, 17):
        for j in (0, 3, 15):
            want = inner(f, modulate(translate(psi, xs[i]), ws[j]))
            assert abs(V.values[i, j] - want) <= 1e-12


def test_stft_examples(mid):
    psi = default_window(mid)
    V = stft(Signal.zeros(mid), psi)
    assert not np.any(V.values)
    V = stft(psi, psi)
    i0 = int(round((0 - V.x0) / V.dx_tf))
    j0 = int(round((0 - V.w0) / V.dw_tf))
    assert abs(abs(V.values[i0, j0]) - 1) <= 1e-12
    # Gaussian ambiguity function on central cells
    for di in range(-12, 13):
        for dj in range(-12, 13):
            x, w = di * V.dx_tf, dj * V.dw_tf
            want = math.exp(-math.pi * (x * x + w * w) / 2)
            assert abs(abs(V.values[i0 + di, j0 + dj]) - want) <= 1e-6


def test_stft_rejects_unnormalized_window(mid):
    with pytest.raises(InvalidArgument, match="unit L2 norm"):
        stft(chirp(mid), default_window(mid) * 1.01)


def test_stft_csv_header(mid):
    V = stft(chirp(mid), default_window(mid), PlaneSpec(2.0, 1.0, 2.0))
    lines = V.to_csv().splitlines()
    assert lines[0] == f"# dx=2.0 dw=1.0 x0={mid.t0!r} w0=-2.0"
    assert lines[1].startswith("0,0,")
    assert len(lines) == 1 + V.values.size


def test_mp_norm_stft_examples(mid):
    psi = default_window(mid)
    assert mp_norm_stft(Signal.zeros(mid), psi, 3).value == 0
    f = chirp(mid) * 0.7 + gaussian(mid, 2.0, 0.5)
    rep = mp_norm_stft(f, psi, 2)
    assert rep.method == "stft" and rep.p_conj == 2
    assert abs(rep.value - f.norm()) <= 1e-3
    for p in (1, 1.5, 4):
        assert mp_norm_stft(f * 2, psi, p).value == 2 * mp_norm_stft(f, psi, p).value


def test_mp_norm_box_examples(small):
    atom = modulate(translate(box_window(small, 0, 1), 3.0), 5)
    for p in (1.1, 2, 3.5, 10):
        assert abs(mp_norm_box(atom, p).value - 1) <= 1e-12
    for N in range(1, 9):
        # the cut at |n| < 512 drops mass ~ 4/(pi^2 512); the exact tail restores it
        rep = mp_norm_box(rademacher(N), 2)
        assert abs(rep.value - 1) <= rep.truncation_tail
        assert abs(math.hypot(rep.value, rep.truncation_tail) - 1) <= 1e-8
        rep = mp_norm_box(rademacher(N), 4)
        assert abs((rep.value ** 4 + rep.truncation_tail ** 4) ** 0.25 - P4) <= 1e-6
    for N in range(1, 5):
        assert abs(mp_norm_box(rademacher(N), 4).value - P4) <= 1e-6
    with pytest.raises(UnsupportedExponent):
        mp_norm_box(atom, 1)
    with pytest.raises(UnsupportedExponent):
        mp_norm_box(atom, 0.5)


def test_mp_norm_box_tail_formula(small):
    # the tail scale is max |c| |n| over the upper half of the range
    f = rademacher(1).sample(small)
    rep = mp_norm_box(f, 2)
    assert rep.truncation_tail > 0
    rep4 = mp_norm_box(rademacher(1), 4, 64)
    assert 0 < rep4.truncation_tail < 0.05


def test_norm_report_json():
    r = NormReport(3.0, 1.5, 0.25, "box", 1e-3)
    assert r.to_json() == '{"p": 3.0, "p_conj": 1.5, "value": 0.25, "method": "box", "truncation_tail": 0.001}'


def test_box_norm_requires_integer_period():
    with pytest.raises(InvalidArgument):
        mp_norm_box(Signal(np.ones(10), GridSpec(10, 0.25)), 2)


def test_m1_surrogate_of_atom(small):
    assert abs(m1_surrogate(box_window(small, 2, 3)) - 1) <= 1e-12


def test_invariance_suite_examples(mid):
    atom = modulate(translate(box_window(mid, 0, 1), 2.0), -3)
    rep = invariance_suite(atom, gaussian(mid), 1.5, 3)
    assert abs(rep.embed - 1) <= 1e-12
    g = gaussian(mid)
    rep = invariance_suite(g, gaussian(mid, 1.0, 2.0), 2, 2)
    assert abs(rep.fourier2 - 1) <= 1e-6
    assert rep.moyal <= 1e-3
    assert all(rep.passed().values())
    with pytest.raises(UnsupportedExponent):
        invariance_suite(g, g, 3, 2)


def test_moyal_with_companion(mid):
    assert moyal_residual(chirp(mid), gaussian(mid, 0.5)) <= 1e-3
    with pytest.raises(InvalidArgument):
        moyal_residual(box_window(mid, 0, 1), box_window(mid, 2, 3))


# properties

SPEC = GridSpec.centered(4, 32)
seeds = st.integers(0, 2 ** 32)


def _rand(seed):
    return random_bandlimited(SPEC, np.random.default_rng(seed), band=6.0)


@settings(max_examples=30, deadline=None)
@given(seeds, seeds, st.floats(1.01, 8), st.floats(-5, 5))
def test_box_norm_is_a_norm(s1, s2, p, a):
    f, g = _rand(s1), _rand(s2)
    nf, ng = mp_norm_box(f, p).value, mp_norm_box(g, p).value
    assert mp_norm_box(f + g, p).value <= nf + ng + 1e-12
    assert math.isclose(mp_norm_box(f * a, p).value, abs(a) * nf, rel_tol=1e-14, abs_tol=1e-300)


@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(1.01, 8), st.floats(1.01, 8))
def test_box_norm_monotone_in_p(seed, p, q):
    p, q = min(p, q), max(p, q)
    f = _rand(seed)
    assert mp_norm_box(f, q).value <= mp_norm_box(f, p).value


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_box_two_norm_is_l2(seed):
    f = _rand(seed)
    rep = mp_norm_box(f, 2)
    assert abs(rep.value - f.norm()) <= 1e-8 + rep.truncation_tail


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_stft_cauchy_schwarz(seed):
    f = _rand(seed)
    V = stft(f, default_window(SPEC), PlaneSpec(0.25, 0.5, 4.0))
    assert np.max(np.abs(V.values)) <= f.norm()


def test_stft_csv_roundtrip(small):
    V = stft(gaussian(small, 0.5, 0.7), default_window(small), PlaneSpec(0.5, 0.5, 4.0))
    back = StftGrid.from_csv(V.to_csv())
    assert np.array_equal(back.values, V.values)
    assert (back.dx_tf, back.dw_tf, back.x0, back.w0) == (V.dx_tf, V.dw_tf, V.x0, V.w0)
