"""Multipath tap-delay channel model and additive white Gaussian noise.

Delays are expressed in the same time units as the waveform grid (symbol
periods when f = 1) and must land on sample instants unless rounding is
explicitly enabled, so that delayed pulse copies superpose exactly and the
closed-form ISI coefficients describe the simulated channel without grid
artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .waveform import SampledWaveform


@dataclass(frozen=True)
class MultipathChannel:
    """Ordered (delay, gain) taps, plus the damping coefficient that generated
    them when the gains follow an exponential decay profile."""

    taps: tuple[tuple[float, float], ...]
    gamma: float | None = None

    def __post_init__(self):
        if len(self.taps) < 1:
            raise ValueError("channel needs at least one tap")
        delays = [t for t, _ in self.taps]
        if delays[0] != 0.0:
            raise ValueError(f"first tap delay must be 0, got {delays[0]}")
        if any(b <= a for a, b in zip(delays, delays[1:])):
            raise ValueError(f"tap delays must be strictly increasing, got {delays}")

    @property
    def L(self) -> int:
        return len(self.taps)

    @property
    def delays(self) -> np.ndarray:
        return np.array([t for t, _ in self.taps])

    @property
    def gains(self) -> np.ndarray:
        return np.array([a for _, a in self.taps])

    @property
    def max_delay(self) -> float:
        return self.taps[-1][0]


@dataclass(frozen=True)
class NoiseSpec:
    """White-noise intensity in continuous-time units plus an RNG seed.

    ``sigma_w`` is the noise level whose square appears in the theoretical
    BER; the discrete simulation injects per-sample variance
    sigma_w**2 * sample_rate so the matched filter reproduces the
    continuous-time noise statistics.
    """

    sigma_w: float
    seed: object = None

    def __post_init__(self):
        if self.sigma_w < 0:
            raise ValueError("sigma_w must be non-negative")


def make_exponential_channel(delays, gamma: float) -> MultipathChannel:
    """Build a channel whose tap gains decay exponentially with delay:
    alpha_l = exp(-gamma * tau_l)."""
    delays = [float(d) for d in delays]
    taps = tuple((d, float(np.exp(-gamma * d))) for d in delays)
    return MultipathChannel(taps=taps, gamma=float(gamma))


def propagate(x: SampledWaveform, ch: MultipathChannel,
              allow_rounding: bool = False) -> SampledWaveform:
    """Superpose delayed, scaled copies of the waveform (noise-free channel).

    The output is extended by the largest delay so no tap's contribution is
    clipped; time alignment (t0_index) is preserved since the first tap has
    zero delay.
    """
    n = len(x.samples)
    shifts = []
    for tau, alpha in ch.taps:
        exact = tau * x.sample_rate
        k = int(round(exact))
        if abs(exact - k) > 1e-9 and not allow_rounding:
            raise ValueError(
                f"tap delay {tau} is {exact} samples, not grid-aligned; "
                "pass allow_rounding=True to round to the nearest sample"
            )
        shifts.append((k, alpha))
    out = np.zeros(n + max(k for k, _ in shifts))
    for k, alpha in shifts:
        out[k:k + n] += alpha * x.samples
    return SampledWaveform(samples=out, sample_rate=x.sample_rate, t0_index=x.t0_index)


def add_awgn(
    x: SampledWaveform, noise: NoiseSpec, rng: np.random.Generator | None = None
) -> SampledWaveform:
    """Add i.i.d. Gaussian noise with per-sample variance sigma_w**2 * sample_rate.

    An explicit generator overrides the seed in ``noise`` so callers managing
    one stream per frame can draw from it directly.
    """
    if noise.sigma_w == 0.0:
        return x
    rng = rng if rng is not None else np.random.default_rng(noise.seed)
    sigma_s = noise.sigma_w * np.sqrt(x.sample_rate)
    noisy = x.samples + rng.normal(0.0, sigma_s, size=len(x.samples))
    return SampledWaveform(samples=noisy, sample_rate=x.sample_rate, t0_index=x.t0_index)


def draw_time_varying(gamma_range, rng: np.random.Generator) -> float:
    """Draw one per-frame damping coefficient uniformly from [lo, hi]."""
    lo, hi = float(gamma_range[0]), float(gamma_range[1])
    if not (0.0 <= lo <= hi):
        raise ValueError(f"invalid gamma range [{lo}, {hi}]")
    return float(rng.uniform(lo, hi))
