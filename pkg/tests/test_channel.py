"""Multipath propagation and noise-injection tests."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from cbwcs import (
    MultipathChannel,
    NoiseSpec,
    add_awgn,
    draw_time_varying,
    generate_baseband,
    make_exponential_channel,
    propagate,
)
from cbwcs.waveform import SampledWaveform


def wave(samples, rate=16.0, t0=0):
    return SampledWaveform(samples=np.asarray(samples, float), sample_rate=rate, t0_index=t0)


class TestMultipathChannel:
    def test_exponential_gains(self):
        ch = make_exponential_channel([0.0, 1.0, 2.0], 0.6)
        assert ch.L == 3
        assert ch.gamma == 0.6
        assert_allclose(ch.gains, np.exp(-0.6 * np.array([0.0, 1.0, 2.0])))
        assert ch.gains[1] == pytest.approx(0.5488116360940264)
        assert ch.max_delay == 2.0

    def test_gains_strictly_decreasing_for_positive_gamma(self):
        ch = make_exponential_channel([0.0, 0.5, 1.0, 3.0], 1.1)
        assert np.all(np.diff(ch.gains) < 0)

    def test_validation(self):
        with pytest.raises(ValueError):
            MultipathChannel(taps=())
        with pytest.raises(ValueError):
            MultipathChannel(taps=((1.0, 1.0),))  # first delay must be 0
        with pytest.raises(ValueError):
            MultipathChannel(taps=((0.0, 1.0), (0.0, 0.5)))  # not increasing


class TestPropagate:
    def test_single_tap_identity(self):
        x = wave(np.arange(10.0), t0=3)
        out = propagate(x, MultipathChannel(taps=((0.0, 1.0),)))
        assert_array_equal(out.samples, x.samples)
        assert out.t0_index == 3 and out.sample_rate == x.sample_rate

    def test_two_tap_superposition(self):
        x = wave(np.arange(1.0, 6.0))
        ch = MultipathChannel(taps=((0.0, 1.0), (0.125, 0.5)))  # 2-sample shift at rate 16
        out = propagate(x, ch)
        want = np.zeros(7)
        want[:5] += x.samples
        want[2:7] += 0.5 * x.samples
        assert_array_equal(out.samples, want)

    def test_linear_and_time_invariant(self, ch2):
        rng = np.random.default_rng(11)
        a = wave(rng.normal(size=64))
        b = wave(rng.normal(size=64))
        sum_in = wave(a.samples + b.samples)
        assert_allclose(
            propagate(sum_in, ch2).samples,
            propagate(a, ch2).samples + propagate(b, ch2).samples,
            atol=1e-12,
        )
        shifted = wave(np.concatenate([np.zeros(5), a.samples]))
        assert_allclose(
            propagate(shifted, ch2).samples[5:],
            propagate(a, ch2).samples,
            atol=1e-12,
        )

    def test_off_grid_delay_rejected_unless_rounding(self):
        x = wave(np.ones(8))
        ch = MultipathChannel(taps=((0.0, 1.0), (0.1, 0.5)))  # 1.6 samples at rate 16
        with pytest.raises(ValueError, match="grid-aligned"):
            propagate(x, ch)
        out = propagate(x, ch, allow_rounding=True)
        assert len(out.samples) == 8 + 2  # rounds to the nearest sample

    def test_symbol_delay_lands_on_grid(self, basis, ch2):
        x = generate_baseband([1.0], basis)
        out = propagate(x, ch2)
        b = x.samples
        want = np.zeros(len(b) + basis.n_r)
        want[: len(b)] += b
        want[basis.n_r:] += ch2.gains[1] * b
        assert_allclose(out.samples, want, atol=1e-15)


class TestAddAwgn:
    def test_zero_sigma_passthrough(self):
        x = wave(np.arange(4.0))
        assert add_awgn(x, NoiseSpec(sigma_w=0.0)) is x

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            NoiseSpec(sigma_w=-1.0)

    def test_per_sample_variance_is_sigma_sq_times_rate(self):
        n = 200_000
        x = wave(np.zeros(n), rate=16.0)
        out = add_awgn(x, NoiseSpec(sigma_w=0.3, seed=5))
        var = np.var(out.samples)
        assert var == pytest.approx(0.3**2 * 16.0, rel=0.02)
        assert np.mean(out.samples) == pytest.approx(0.0, abs=0.02)

    def test_seed_reproducible(self):
        x = wave(np.zeros(100))
        a = add_awgn(x, NoiseSpec(sigma_w=1.0, seed=42))
        b = add_awgn(x, NoiseSpec(sigma_w=1.0, seed=42))
        assert_array_equal(a.samples, b.samples)

    def test_explicit_rng_overrides_seed(self):
        x = wave(np.zeros(100))
        a = add_awgn(x, NoiseSpec(sigma_w=1.0, seed=1), rng=np.random.default_rng(9))
        b = add_awgn(x, NoiseSpec(sigma_w=1.0, seed=2), rng=np.random.default_rng(9))
        assert_array_equal(a.samples, b.samples)


class TestDrawTimeVarying:
    def test_in_range_and_reproducible(self):
        rng = np.random.default_rng(0)
        draws = [draw_time_varying((0.3, 0.9), rng) for _ in range(200)]
        assert all(0.3 <= g <= 0.9 for g in draws)
        rng2 = np.random.default_rng(0)
        again = [draw_time_varying((0.3, 0.9), rng2) for _ in range(200)]
        assert draws == again

    def test_bad_range_rejected(self):
        with pytest.raises(ValueError):
            draw_time_varying((0.9, 0.3), np.random.default_rng(0))
        with pytest.raises(ValueError):
            draw_time_varying((-0.1, 0.5), np.random.default_rng(0))
