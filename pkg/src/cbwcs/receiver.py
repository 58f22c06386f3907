"""Matched filtering, symbol-instant alignment, and SVM feature extraction.

The receiver correlates the incoming waveform with the time-reversed basis
pulse.  Because the discrete convolution carries an explicit dt weight, the
output at symbol instants decomposes over pulse-autocorrelation (ISI)
coefficients and white input noise maps to decision-sample variance
sigma_w**2 * E_p, keeping the simulation directly comparable to the
closed-form error-rate theory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .waveform import BasisParams, SampledWaveform, as_symbols, sampled_basis

FEATURE_SPAN = 7  # symbols per feature window: 3 past, current, 3 future


@dataclass(frozen=True)
class AlignedOutput:
    """Matched-filter output with the symbol-instant index map.

    ``t0_index`` is the array index of symbol 0's decision instant (t = 0);
    symbol n samples at index t0_index + n * n_r.
    """

    y: np.ndarray
    sample_rate: float
    t0_index: int
    n_r: int

    def symbol_index_map(self, n: int) -> int:
        return self.t0_index + n * self.n_r

    @property
    def n_symbols(self) -> int:
        """Count of symbol instants that fall inside the output array."""
        return (len(self.y) - 1 - self.t0_index) // self.n_r + 1


@dataclass(frozen=True)
class FeatureVector:
    """A 112-sample window spanning symbols n-3 .. n+3, optionally labeled
    with the true center symbol."""

    values: np.ndarray
    center_symbol: int
    label: float | None = None

    def __post_init__(self):
        if self.label is not None and self.label not in (-1.0, +1.0):
            raise ValueError(f"label must be -1 or +1, got {self.label}")


@dataclass(frozen=True)
class FeatureScaler:
    """Per-dimension affine map to [-1, 1] frozen at fit time.

    Dimensions that were constant in the training data map to 0.
    """

    lo: np.ndarray
    hi: np.ndarray

    def transform(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        span = self.hi - self.lo
        scale = np.divide(2.0, span, out=np.zeros_like(span), where=span > 0)
        return np.where(span > 0, (values - self.lo) * scale - 1.0, 0.0)


def matched_filter(r: SampledWaveform, p: BasisParams | None = None) -> AlignedOutput:
    """Correlate the received waveform with the basis pulse.

    The filter is the time-reversed truncated pulse realized as an FIR with
    (n_p + 1) * n_r + 1 taps; the dt weight makes the output a Riemann sum of
    the continuous correlation integral.  The symbol-0 instant lands at input
    index t0_index shifted by one symbol period of filter group delay.
    """
    p = p or BasisParams()
    if abs(r.sample_rate - p.sample_rate) > 1e-9:
        raise ValueError(
            f"waveform sample rate {r.sample_rate} != basis sample rate {p.sample_rate}"
        )
    b = sampled_basis(p)
    if len(r.samples) < len(b):
        raise ValueError(
            f"waveform has {len(r.samples)} samples, shorter than the "
            f"{len(b)}-tap matched filter"
        )
    y = p.dt * np.convolve(r.samples, b[::-1])
    return AlignedOutput(
        y=y,
        sample_rate=r.sample_rate,
        t0_index=r.t0_index + p.n_r,
        n_r=p.n_r,
    )


def sample_at_symbol(a: AlignedOutput, n: int) -> float:
    if not 0 <= n < a.n_symbols:
        raise IndexError(f"symbol index {n} outside [0, {a.n_symbols})")
    return float(a.y[a.symbol_index_map(n)])


def decision_samples(a: AlignedOutput, n_lo: int, n_hi: int) -> np.ndarray:
    """Decision-instant samples for symbols n_lo .. n_hi - 1 as one array."""
    if not (0 <= n_lo <= n_hi <= a.n_symbols):
        raise IndexError(f"symbol range [{n_lo}, {n_hi}) outside [0, {a.n_symbols})")
    return a.y[a.symbol_index_map(n_lo):a.symbol_index_map(n_hi):a.n_r].copy()


def extract_features(a: AlignedOutput, n: int) -> FeatureVector:
    """The window of n_r * 7 consecutive samples from symbol instant n-3
    through one sample before instant n+4."""
    half = FEATURE_SPAN // 2
    if not half <= n < a.n_symbols - half:
        raise IndexError(
            f"feature window for symbol {n} needs symbols {n - half}..{n + half}, "
            f"valid centers are [{half}, {a.n_symbols - half})"
        )
    lo = a.symbol_index_map(n - half)
    values = a.y[lo:lo + FEATURE_SPAN * a.n_r].copy()
    return FeatureVector(values=values, center_symbol=n)


def extract_feature_matrix(a: AlignedOutput, n_lo: int, n_hi: int) -> np.ndarray:
    """Feature windows for centers n_lo .. n_hi - 1 stacked as rows (bulk path
    for decoding whole frames)."""
    half = FEATURE_SPAN // 2
    if not (half <= n_lo and n_hi <= a.n_symbols - half and n_lo <= n_hi):
        raise IndexError(f"feature centers [{n_lo}, {n_hi}) out of range")
    width = FEATURE_SPAN * a.n_r
    start = a.symbol_index_map(n_lo - half)
    idx = start + a.n_r * np.arange(n_hi - n_lo)[:, None] + np.arange(width)[None, :]
    return a.y[idx]


def build_training_set(probe, a: AlignedOutput) -> list[FeatureVector]:
    """Labeled feature vectors for every probe symbol with a full window:
    centers n in [3, len(probe) - 4], label = true probe symbol."""
    s = as_symbols(probe)
    half = FEATURE_SPAN // 2
    if len(s) < FEATURE_SPAN:
        raise ValueError(f"probe of {len(s)} symbols is shorter than one window")
    mat = extract_feature_matrix(a, half, len(s) - half)
    return [
        FeatureVector(values=mat[k], center_symbol=half + k, label=float(s[half + k]))
        for k in range(mat.shape[0])
    ]


def fit_scaler(train: list[FeatureVector]) -> FeatureScaler:
    if not train:
        raise ValueError("cannot fit a scaler on an empty training set")
    mat = np.stack([fv.values for fv in train])
    return FeatureScaler(lo=mat.min(axis=0), hi=mat.max(axis=0))


def apply_scaler(sc: FeatureScaler, fv: FeatureVector) -> FeatureVector:
    return FeatureVector(
        values=sc.transform(fv.values),
        center_symbol=fv.center_symbol,
        label=fv.label,
    )


def dump_decision_csv(path, a: AlignedOutput, symbols) -> None:
    """Write (n, y_n, s_n) triples for eyeballing decision samples against
    the transmitted sequence."""
    s = as_symbols(symbols)
    n_hi = min(len(s), a.n_symbols)
    with open(path, "w") as fh:
        fh.write("n,y_n,s_n\n")
        for n in range(n_hi):
            fh.write(f"{n},{sample_at_symbol(a, n):.10g},{int(s[n]):+d}\n")


def export_feature_csv(path, features: list[FeatureVector]) -> None:
    """Write feature vectors one per row (112 sample columns, then the label)
    so external SVM tools can cross-check training data."""
    if not features:
        raise ValueError("no feature vectors to export")
    width = len(features[0].values)
    with open(path, "w") as fh:
        fh.write(",".join(f"x{k}" for k in range(width)) + ",label\n")
        for fv in features:
            if fv.label is None:
                raise ValueError(
                    f"feature vector at center {fv.center_symbol} is unlabeled"
                )
            row = ",".join(f"{v:.10g}" for v in fv.values)
            fh.write(f"{row},{int(fv.label):+d}\n")
