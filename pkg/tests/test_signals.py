import json
import math

import numpy as np
import pytest

from bmlab.signals import (
    ExponentTriple,
    GridSpec,
    GuardError,
    SampledSignal,
    Spectrum,
    dft,
    eval_signal_at,
    gaussian_spectrum_profile,
    idft,
    lp_norm,
    make_gaussian,
    random_bandlimited,
    signal_from_csv,
    signal_from_json,
    signal_to_csv,
    signal_to_json,
)
from bmlab.normlab import loglog_slope


def test_gridspec_invariants():
    g = GridSpec(64, 16.0)
    assert g.dx * g.dxi * g.n == pytest.approx(1.0)
    assert g.x[0] == -8.0
    assert g.freqs[g.n // 2] == 0.0
    with pytest.raises(ValueError):
        GridSpec(48, 16.0)  # not a power of two
    with pytest.raises(ValueError):
        GridSpec(4, 16.0)
    with pytest.raises(ValueError):
        GridSpec(64, -1.0)


def test_dft_of_discrete_delta_is_one():
    g = GridSpec(32, 8.0)
    s = np.zeros(g.n, dtype=complex)
    s[g.n // 2] = 1.0 / g.dx  # unit-mass spike at x = 0
    F = dft(SampledSignal(g, s))
    np.testing.assert_allclose(F.coeffs, np.ones(g.n), atol=1e-12)


def test_dft_of_constant_is_grid_delta():
    g = GridSpec(32, 8.0)
    F = dft(SampledSignal(g, np.ones(g.n)))
    expected = np.zeros(g.n)
    expected[g.n // 2] = g.length
    np.testing.assert_allclose(F.coeffs, expected, atol=1e-12)


def test_gaussian_transform_closed_form():
    g = GridSpec(256, 32.0)
    f = make_gaussian(1.0, g)
    F = dft(f)
    assert np.abs(F.coeffs - gaussian_spectrum_profile(1.0, g.freqs)).max() < 1e-10


def test_roundtrip():
    g = GridSpec(128, 16.0)
    rng = np.random.default_rng(0)
    f = SampledSignal(g, rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n))
    back = idft(dft(f))
    assert np.abs(back.samples - f.samples).max() < 1e-12 * np.abs(f.samples).max()


def test_idft_of_ones_is_delta():
    g = GridSpec(32, 8.0)
    f = idft(Spectrum(g, np.ones(g.n)))
    expected = np.zeros(g.n)
    expected[g.n // 2] = 1.0 / g.dx
    np.testing.assert_allclose(f.samples, expected, atol=1e-12)


def test_parseval():
    g = GridSpec(256, 32.0)
    rng = np.random.default_rng(1)
    for _ in range(5):
        s = rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n)
        f = SampledSignal(g, s)
        lhs = g.dx * np.sum(np.abs(s) ** 2)
        rhs = g.dxi * np.sum(np.abs(dft(f).coeffs) ** 2)
        assert abs(lhs - rhs) < 1e-10 * lhs


def test_dft_linear():
    g = GridSpec(64, 8.0)
    rng = np.random.default_rng(2)
    f = SampledSignal(g, rng.standard_normal(g.n))
    h = SampledSignal(g, rng.standard_normal(g.n))
    a, b = 2.0 - 1j, 0.7
    combo = SampledSignal(g, a * f.samples + b * h.samples)
    np.testing.assert_allclose(
        dft(combo).coeffs, a * dft(f).coeffs + b * dft(h).coeffs, atol=1e-12
    )


def test_lp_norm_constant():
    g = GridSpec(16, 4.0)
    f = SampledSignal(g, np.ones(g.n))
    assert lp_norm(f, 2) == pytest.approx(2.0)
    assert lp_norm(f, math.inf) == pytest.approx(1.0)


def test_lp_norm_against_direct_sum():
    g = GridSpec(64, 8.0)
    rng = np.random.default_rng(3)
    s = rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n)
    f = SampledSignal(g, s)
    for p in (0.5, 1.0, 1.7, 3.0):
        direct = (sum(abs(v) ** p for v in s) * g.dx) ** (1 / p)
        assert lp_norm(f, p) == pytest.approx(direct, rel=1e-12)


def test_lp_norm_errors_and_monotone_domination():
    g = GridSpec(16, 4.0)
    f = SampledSignal(g, np.ones(g.n))
    with pytest.raises(ValueError):
        lp_norm(f, 0.0)
    with pytest.raises(ValueError):
        lp_norm(f, -2)
    small = SampledSignal(g, 0.5 * np.ones(g.n))
    for p in (0.7, 1, 2, math.inf):
        assert lp_norm(small, p) <= lp_norm(f, p)


def test_gaussian_norm_scaling_slopes():
    # ||G_lam||_p scales like lam^(1/p - 1)
    g = GridSpec(2048, 32.0)
    lams = np.geomspace(0.25, 4.0, 17)
    for p in (1.0, 1.5, 2.0, 4.0):
        slope, _ = loglog_slope(lams, [lp_norm(make_gaussian(l, g), p) for l in lams])
        assert abs(slope - (1 / p - 1)) < 0.02
    slope, _ = loglog_slope(lams, [lp_norm(make_gaussian(l, g), math.inf) for l in lams])
    assert abs(slope - (-1)) < 0.02


def test_gaussian_shape_and_mass():
    g = GridSpec(256, 32.0)
    f = make_gaussian(1.0, g)
    assert np.abs(f.samples.imag).max() < 1e-12
    re = f.samples.real
    assert re.min() > -1e-12 and re[g.n // 2] > 0
    np.testing.assert_allclose(re, np.roll(re[::-1], 1), atol=1e-12)  # even
    assert abs(g.dx * re.sum() - 1.0) < 1e-10


def test_gaussian_guard_rejects_small_grids():
    with pytest.raises(GuardError):
        make_gaussian(0.05, GridSpec(64, 16.0))  # frequency tail too fat
    with pytest.raises(GuardError):
        make_gaussian(20.0, GridSpec(64, 16.0))  # spatial tail too fat
    make_gaussian(1.0, GridSpec(256, 32.0))  # fine


def test_eval_signal_at_matches_samples():
    g = GridSpec(64, 16.0)
    f = random_bandlimited(g, np.random.default_rng(4))
    vals = eval_signal_at(f, g.x)
    np.testing.assert_allclose(vals, f.samples, atol=1e-12)


def test_exponent_triple_derived():
    e = ExponentTriple(2, 4, 2)
    assert e.p1c == 2 and e.p2c == pytest.approx(4 / 3) and e.p3c == 2
    assert e.q1d == pytest.approx(1 / (0.5 + 0.25 - 0.5))
    assert e.q2d == pytest.approx(2 / (0.5 + 0.25 - 0.5))
    holder = ExponentTriple(2, 2, 1)
    assert holder.q1d == math.inf and holder.q2d == math.inf
    e1 = ExponentTriple(1, math.inf, 1)
    assert e1.p1c == math.inf and e1.p2c == 1
    with pytest.raises(ValueError):
        ExponentTriple(0.5, 2, 1)
    with pytest.raises(ValueError):
        ExponentTriple(2, 2, -1)


def test_csv_json_roundtrip(tmp_path):
    g = GridSpec(32, 8.0)
    f = random_bandlimited(g, np.random.default_rng(5))
    p = tmp_path / "sig.csv"
    signal_to_csv(f, p)
    back = signal_from_csv(p)
    assert back.grid == g
    np.testing.assert_allclose(back.samples, f.samples, atol=1e-12)

    q = tmp_path / "sig.json"
    signal_to_json(f, q)
    back2 = signal_from_json(q)
    assert back2.grid == g
    np.testing.assert_allclose(back2.samples, f.samples, atol=1e-15)
    doc = json.loads(q.read_text())
    assert doc["schema"] == 1
