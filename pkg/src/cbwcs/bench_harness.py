"""Monte-Carlo BER harness: frame simulation, sweeps, probes, CSV, manifests.

A frame is a known probe followed by random information symbols.  Every
selected decoder consumes the identical received waveform of each frame, the
probe trains the SVM (and seeds decision-feedback history), and only
information bits are counted — the fair-comparison protocol.

Noise calibration: the sweep axis is filtered SNR in dB, defined on the
decision statistic.  For a point at SNR s the decision-sample noise standard
deviation is sigma_d = P / sqrt(2 * 10**(s/10)) with P the effective symbol
energy of the reference channel; the white-noise intensity injected before
the matched filter is sigma_d / sqrt(E_p), which the filter maps back to
sigma_d at the decision instants.  Under this convention the all-genie
decoder's BER equals 0.5 * erfc(sqrt(10**(s/10))) exactly, which is what the
``theory_ber`` column carries.  On the time-varying channel the mapping is
pinned to the fixed reference gamma, so per-frame draws change the effective
SNR — a transmitter that cannot track the fading.

An alternative ``snr_axis = ebn0`` interprets the axis as Eb/N0 with E_b the
average per-bit energy of the noiseless received waveform.
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__
from .channel import (
    MultipathChannel,
    NoiseSpec,
    add_awgn,
    draw_time_varying,
    make_exponential_channel,
    propagate,
)
from .ga_tune import GaConfig, tune_hyperparameters
from .receiver import (
    FEATURE_SPAN,
    FeatureScaler,
    build_training_set,
    extract_feature_matrix,
    matched_filter,
)
from .svm_core import SvmHyper, SvmModel, TrainingSet, train_svm
from .threshold_decode import (
    IsiTable,
    ThresholdKind,
    build_isi_table,
    decode_threshold,
    symbol_energy,
    theoretical_ber,
)
from .waveform import BasisParams, as_symbols, generate_baseband, isi_coefficient

log = logging.getLogger(__name__)

THRESHOLD_DECODERS = {kind.value: kind for kind in ThresholdKind}
DECODER_NAMES = tuple(THRESHOLD_DECODERS) + ("gasvm",)
PROBE_KINDS = ("All7", "All9", "Random")
PROBE_ORDERS = ("ascending", "debruijn")
CSV_HEADER = "snr_db,decoder,bits,errors,ber,theory_ber"

# Stream tags appended to (seed, point, frame) when deriving generators, so
# the frame stream and the GA stream can never collide.
_TAG_FRAME = 0
_TAG_GA = 1


class SvmTrainingError(RuntimeError):
    """SVM training failed for one frame; the run loop records and skips it."""


@dataclass(frozen=True)
class FrameConfig:
    """Frame layout: probe (training preamble) plus information payload."""

    probe_kind: str = "All7"
    probe_len: int = 896
    info_len: int = 1152
    probe_order: str = "ascending"

    def __post_init__(self):
        kind = {k.lower(): k for k in PROBE_KINDS}.get(self.probe_kind.lower())
        if kind is None:
            raise ValueError(
                f"probe_kind must be one of {PROBE_KINDS}, got {self.probe_kind!r}"
            )
        object.__setattr__(self, "probe_kind", kind)
        forced = {"All7": 896, "All9": 4608}.get(kind)
        if forced is not None:
            object.__setattr__(self, "probe_len", forced)
        if self.probe_len < FEATURE_SPAN:
            raise ValueError(f"probe_len must be >= {FEATURE_SPAN}")
        if self.info_len < 1:
            raise ValueError("info_len must be >= 1")
        if self.probe_order not in PROBE_ORDERS:
            raise ValueError(
                f"probe_order must be one of {PROBE_ORDERS}, got {self.probe_order!r}"
            )

    @property
    def frame_len(self) -> int:
        return self.probe_len + self.info_len


@dataclass(frozen=True)
class SimConfig:
    """Everything one sweep needs; every field maps to a flat config key."""

    snr_points: tuple[float, ...]
    decoders: tuple[str, ...] = ("zero", "past", "past_fut1_genie", "optimal_genie")
    delays: tuple[float, ...] = (0.0, 1.0)
    gamma: float = 0.6
    gamma_range: tuple[float, float] = (0.3, 0.9)
    frame: FrameConfig = FrameConfig()
    basis: BasisParams = BasisParams()
    seed: int = 20240901
    min_bits: int = 200_000
    min_errors: int = 100
    max_bits: int | None = None
    retune: str = "per_point"  # GA cadence when gasvm runs: per_point | per_frame
    refit: str = "per_frame"  # SVM fit cadence: per_frame | per_point
    snr_axis: str = "filtered"  # filtered | ebn0
    ga: GaConfig = GaConfig()
    fixed_hyper: SvmHyper | None = None
    svm_tol: float = 1e-3
    svm_max_iter: int = 400_000
    kernel_cache_limit: int = 1000
    scale: bool = True  # feature scaling to [-1, 1] before the SVM

    def __post_init__(self):
        if not self.snr_points:
            raise ValueError("snr_points must be non-empty")
        unknown = [d for d in self.decoders if d not in DECODER_NAMES]
        if unknown:
            raise ValueError(f"unknown decoders {unknown}; valid: {DECODER_NAMES}")
        if not self.decoders:
            raise ValueError("decoders must be non-empty")
        if self.min_bits < self.frame.info_len:
            raise ValueError("min_bits must cover at least one frame of info bits")
        if self.max_bits is not None and self.max_bits < self.min_bits:
            raise ValueError("max_bits must be >= min_bits")
        if self.retune not in ("per_point", "per_frame"):
            raise ValueError("retune must be per_point or per_frame")
        if self.refit not in ("per_frame", "per_point"):
            raise ValueError("refit must be per_frame or per_point")
        if self.snr_axis not in ("filtered", "ebn0"):
            raise ValueError("snr_axis must be filtered or ebn0")
        if not self.gamma_range[0] <= self.gamma_range[1]:
            raise ValueError("gamma_range must be ordered")


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    decoder: str
    bits: int
    errors: int
    ber: float
    theory_ber: float | None = None

    def __post_init__(self):
        if not 0 <= self.errors <= self.bits:
            raise ValueError(f"errors={self.errors} outside [0, bits={self.bits}]")
        if self.bits > 0 and abs(self.ber - self.errors / self.bits) > 1e-12:
            raise ValueError("ber inconsistent with errors/bits")


@dataclass
class FrameResult:
    truth: np.ndarray
    decisions: dict[str, np.ndarray]
    gamma: float
    svm_hyper: SvmHyper | None = None


@dataclass
class RunResult:
    """List-like container of BerPoint rows plus run diagnostics."""

    points: list[BerPoint] = field(default_factory=list)
    time_varying: bool = False
    gamma_draws: list[float] = field(default_factory=list)
    frames_run: int = 0
    skipped_frames: int = 0
    tuning: list[dict] = field(default_factory=list)
    wall_seconds: float = 0.0

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]


def _debruijn_cycle(order: int) -> list[int]:
    """Binary de Bruijn cycle of the given order (FKM / Lyndon-word algorithm)."""
    a = [0] * (2 * order)
    seq: list[int] = []

    def db(t: int, p: int) -> None:
        if t > order:
            if order % p == 0:
                seq.extend(a[1:p + 1])
        else:
            a[t] = a[t - p]
            db(t + 1, p)
            for j in range(a[t - p] + 1, 2):
                a[t] = j
                db(t + 1, t)

    db(1, 1)
    return seq


def make_probe(
    kind: str,
    rng: np.random.Generator | None = None,
    *,
    length: int | None = None,
    order: str = "ascending",
) -> np.ndarray:
    """Training preamble as +/-1 symbols.

    All7 / All9 concatenate every 7- or 9-bit pattern as aligned blocks — in
    ascending binary order, or ordered along a de Bruijn cycle (the sequencing
    is a free choice; the option exists because sliding-window coverage
    differs).  Random draws i.i.d. symbols of the requested length.
    """
    kind = {k.lower(): k for k in PROBE_KINDS}.get(kind.lower(), kind)
    if kind == "Random":
        if rng is None or length is None:
            raise ValueError("Random probe needs an rng and a length")
        return rng.choice([-1.0, 1.0], size=length)
    if kind not in ("All7", "All9"):
        raise ValueError(f"unknown probe kind {kind!r}")
    n = 7 if kind == "All7" else 9
    if order == "ascending":
        bits = [(v >> (n - 1 - k)) & 1 for v in range(2 ** n) for k in range(n)]
    elif order == "debruijn":
        bits = _debruijn_cycle(n) * n
    else:
        raise ValueError(f"probe order must be one of {PROBE_ORDERS}, got {order!r}")
    return np.array([1.0 if b else -1.0 for b in bits])


def average_bit_energy(ch: MultipathChannel, p: BasisParams | None = None) -> float:
    """Expected noiseless received energy per information symbol (i.i.d. data):
    sum over tap pairs of alpha_l * alpha_m * R(|tau_l - tau_m|)."""
    p = p or BasisParams()
    total = 0.0
    for tau_l, alpha_l in ch.taps:
        for tau_m, alpha_m in ch.taps:
            total += alpha_m * isi_coefficient(abs(tau_l - tau_m), 0, alpha_l, p)
    return total


def _point_noise(cfg: SimConfig, snr_db: float) -> tuple[float, float]:
    """White-noise intensity and the theory BER for one sweep point."""
    p = cfg.basis
    snr_lin = 10.0 ** (snr_db / 10.0)
    e_p = isi_coefficient(0.0, 0, 1.0, p)
    ref = make_exponential_channel(cfg.delays, cfg.gamma)
    if cfg.snr_axis == "filtered":
        sigma_d = symbol_energy(ref, p) / math.sqrt(2.0 * snr_lin)
        sigma_n = sigma_d / math.sqrt(e_p)
        theory = float(theoretical_ber(snr_db))
    else:
        e_b = average_bit_energy(ref, p)
        sigma_n = math.sqrt(e_b / (2.0 * snr_lin))
        snr_filtered = symbol_energy(ref, p) ** 2 / (2.0 * sigma_n ** 2 * e_p)
        theory = float(theoretical_ber(10.0 * math.log10(snr_filtered)))
    return sigma_n, theory


@dataclass
class _SvmContext:
    """Per-point SVM state: tuned hyperparameters, an optionally frozen model,
    and a tuning log for the manifest."""

    cfg: SimConfig
    point_index: int
    frame_index: int = 0
    hyper: SvmHyper | None = None
    model: SvmModel | None = None
    tuned: list[dict] = field(default_factory=list)


def probe_training_set(probe, aligned, scale: bool = True) -> TrainingSet:
    """Labeled, scaled training set from the probe section of one frame.

    With ``scale=False`` the scaler is the identity map, so raw matched-filter
    samples feed the kernel unchanged.
    """
    feats = build_training_set(probe, aligned)
    if scale:
        return TrainingSet.from_features(feats)
    width = len(feats[0].values)
    identity = FeatureScaler(lo=np.full(width, -1.0), hi=np.full(width, 1.0))
    return TrainingSet.from_features(feats, scaler=identity)


def _svm_for_frame(ctx: _SvmContext, probe: np.ndarray, aligned) -> tuple[SvmModel, SvmHyper]:
    cfg = ctx.cfg
    if ctx.model is not None and cfg.refit == "per_point":
        return ctx.model, ctx.model.hyper
    try:
        ts = probe_training_set(probe, aligned, scale=cfg.scale)
        hyper = cfg.fixed_hyper or ctx.hyper
        if hyper is None or cfg.retune == "per_frame":
            ga_rng = np.random.default_rng(
                [cfg.seed, ctx.point_index, ctx.frame_index, _TAG_GA]
            )
            res = tune_hyperparameters(
                ts, cfg.ga, ga_rng, tol=cfg.svm_tol, max_iter=cfg.svm_max_iter
            )
            hyper = res.hyper
            ctx.tuned.append(
                {
                    "frame": ctx.frame_index,
                    "c": hyper.c,
                    "gamma": hyper.gamma,
                    "cv_fitness": res.best.fitness,
                    "evaluations": res.evaluations,
                }
            )
            if cfg.retune == "per_point":
                ctx.hyper = hyper
        model = train_svm(
            ts,
            hyper,
            tol=cfg.svm_tol,
            max_iter=cfg.svm_max_iter,
            kernel_cache_limit=cfg.kernel_cache_limit,
        )
    except (ValueError, FloatingPointError) as exc:
        raise SvmTrainingError(f"frame {ctx.frame_index}: {exc}") from exc
    if cfg.refit == "per_point":
        ctx.model = model
    return model, hyper


def simulate_frame(
    cfg: SimConfig,
    gamma: float,
    sigma_w: float,
    rng: np.random.Generator,
    *,
    svm_ctx: _SvmContext | None = None,
    probe: np.ndarray | None = None,
    table: IsiTable | None = None,
) -> FrameResult:
    """Simulate one frame end to end and decode its info bits with every
    selected decoder from the identical received waveform."""
    p = cfg.basis
    if probe is None:
        probe = make_probe(
            cfg.frame.probe_kind,
            rng,
            length=cfg.frame.probe_len,
            order=cfg.frame.probe_order,
        )
    info = rng.choice([-1.0, 1.0], size=cfg.frame.info_len)
    sym = np.concatenate([probe, info])
    ch = make_exponential_channel(cfg.delays, gamma)
    x = generate_baseband(sym, p)
    r = add_awgn(propagate(x, ch), NoiseSpec(sigma_w=sigma_w), rng=rng)
    aligned = matched_filter(r, p)
    start = len(probe)
    table = table or build_isi_table(ch, p)

    decisions: dict[str, np.ndarray] = {}
    hyper_used = None
    for name in cfg.decoders:
        if name == "gasvm":
            continue
        decisions[name] = decode_threshold(
            aligned,
            ch,
            THRESHOLD_DECODERS[name],
            p,
            true_symbols=sym,
            n_lo=start,
            known_prefix=start,
            table=table,
        )
    if "gasvm" in cfg.decoders:
        if svm_ctx is None:
            svm_ctx = _SvmContext(cfg=cfg, point_index=0)
        model, hyper_used = _svm_for_frame(svm_ctx, probe, aligned)
        windows = extract_feature_matrix(aligned, start, len(sym))
        decisions["gasvm"] = model.predict(windows)
    return FrameResult(truth=info, decisions=decisions, gamma=gamma, svm_hyper=hyper_used)


def _run(cfg: SimConfig, time_varying: bool) -> RunResult:
    t_start = time.monotonic()
    p = cfg.basis
    result = RunResult(time_varying=time_varying)
    static_probe = (
        None
        if cfg.frame.probe_kind == "Random"
        else make_probe(cfg.frame.probe_kind, order=cfg.frame.probe_order)
    )
    static_table = (
        None
        if time_varying
        else build_isi_table(make_exponential_channel(cfg.delays, cfg.gamma), p)
    )
    for k, snr in enumerate(cfg.snr_points):
        sigma_n, theory = _point_noise(cfg, snr)
        ctx = (
            _SvmContext(cfg=cfg, point_index=k) if "gasvm" in cfg.decoders else None
        )
        errors = {name: 0 for name in cfg.decoders}
        bits = 0
        fi = 0
        while True:
            rng = np.random.default_rng([cfg.seed, k, fi, _TAG_FRAME])
            gamma = (
                draw_time_varying(cfg.gamma_range, rng) if time_varying else cfg.gamma
            )
            if time_varying:
                result.gamma_draws.append(gamma)
            if ctx is not None:
                ctx.frame_index = fi
            try:
                fr = simulate_frame(
                    cfg,
                    gamma,
                    sigma_n,
                    rng,
                    svm_ctx=ctx,
                    probe=static_probe,
                    table=None if time_varying else static_table,
                )
            except SvmTrainingError as exc:
                log.warning("skipping frame: %s", exc)
                result.skipped_frames += 1
                fi += 1
                continue
            for name, dec in fr.decisions.items():
                errors[name] += int(np.count_nonzero(dec != fr.truth))
            bits += len(fr.truth)
            result.frames_run += 1
            fi += 1
            if bits >= cfg.min_bits and (
                min(errors.values()) >= cfg.min_errors
                or (cfg.max_bits is not None and bits >= cfg.max_bits)
            ):
                break
        for name in cfg.decoders:
            result.points.append(
                BerPoint(
                    snr_db=snr,
                    decoder=name,
                    bits=bits,
                    errors=errors[name],
                    ber=errors[name] / bits,
                    theory_ber=theory,
                )
            )
        if ctx is not None:
            result.tuning.append(
                {"point": k, "snr_db": snr, "ga_runs": ctx.tuned}
            )
        log.info(
            "point %d (snr=%g dB): %d bits, errors %s",
            k,
            snr,
            bits,
            {n: errors[n] for n in cfg.decoders},
        )
    result.wall_seconds = time.monotonic() - t_start
    return result


def run_static_ber(cfg: SimConfig) -> RunResult:
    """BER sweep on the fixed-gamma channel."""
    return _run(cfg, time_varying=False)


def run_time_varying_ber(cfg: SimConfig) -> RunResult:
    """BER sweep with gamma redrawn per frame from cfg.gamma_range; the
    SNR-to-noise mapping stays pinned to the fixed reference gamma."""
    return _run(cfg, time_varying=True)


def run_training_size_comparison(cfg: SimConfig) -> dict[str, RunResult]:
    """Run the SVM decoder with All7 and All9 probes on identical seeds and
    return both results, with rows relabeled gasvm_all7 / gasvm_all9."""
    out: dict[str, RunResult] = {}
    decoders = tuple(d for d in cfg.decoders if d == "gasvm") or ("gasvm",)
    for kind in ("All7", "All9"):
        sub = replace(
            cfg,
            decoders=decoders,
            frame=replace(cfg.frame, probe_kind=kind),
        )
        res = run_static_ber(sub)
        res.points = [
            replace(pt, decoder=f"gasvm_{kind.lower()}") if pt.decoder == "gasvm" else pt
            for pt in res.points
        ]
        out[kind] = res
    return out


def emit_csv(points, path: str) -> None:
    """Fixed-schema BER table; theory_ber is empty when not applicable."""
    try:
        with open(path, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            for pt in points:
                theory = "" if pt.theory_ber is None else format(pt.theory_ber, ".10g")
                fh.write(
                    f"{pt.snr_db:g},{pt.decoder},{pt.bits},{pt.errors},"
                    f"{format(pt.ber, '.10g')},{theory}\n"
                )
    except OSError as exc:
        raise OSError(f"writing BER CSV to {path!r}: {exc}") from exc


def emit_theory_curve(cfg: SimConfig, path: str) -> None:
    """Closed-form error-rate curve over the configured SNR grid."""
    try:
        with open(path, "w") as fh:
            fh.write("snr_db,theory_ber\n")
            for snr in cfg.snr_points:
                _, theory = _point_noise(cfg, snr)
                fh.write(f"{snr:g},{format(theory, '.10g')}\n")
    except OSError as exc:
        raise OSError(f"writing theory CSV to {path!r}: {exc}") from exc


def waveform_dump(symbols, path: str, p: BasisParams | None = None) -> None:
    """Time/value samples of the noiseless baseband for a symbol sequence."""
    p = p or BasisParams()
    x = generate_baseband(as_symbols(symbols), p)
    try:
        with open(path, "w") as fh:
            fh.write("t,x\n")
            for t, v in zip(x.times(), x.samples):
                fh.write(f"{format(t, '.10g')},{format(v, '.10g')}\n")
    except OSError as exc:
        raise OSError(f"writing waveform dump to {path!r}: {exc}") from exc


def run_manifest_doc(
    result: RunResult, cfg: SimConfig, extra: dict | None = None
) -> dict:
    """Reproducibility record of config, seed, versions, and run diagnostics."""
    doc = {
        "format": "cbwcs-run-manifest v1",
        "created_unix": time.time(),
        "package_version": __version__,
        "config": asdict(cfg),
        "time_varying": result.time_varying,
        "tv_noise_convention": "sigma fixed per point from the reference gamma",
        "frames_run": result.frames_run,
        "skipped_frames": result.skipped_frames,
        "wall_seconds": result.wall_seconds,
        "svm_tuning": result.tuning,
        "gamma_draws": result.gamma_draws,
        "points": [asdict(pt) for pt in result.points],
    }
    if extra:
        doc.update(extra)
    return doc


def write_json(doc: dict, path: str) -> None:
    try:
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2, default=_json_default)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"writing JSON to {path!r}: {exc}") from exc


def write_run_manifest(
    result: RunResult, cfg: SimConfig, path: str, extra: dict | None = None
) -> None:
    write_json(run_manifest_doc(result, cfg, extra), path)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# --- flat key = value configuration -----------------------------------------

def _float_list(s: str) -> tuple[float, ...]:
    return tuple(float(t) for t in s.split(",") if t.strip())


def _str_list(s: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in s.split(",") if t.strip())


def _opt_int(s: str) -> int | None:
    v = int(s)
    return None if v <= 0 else v


def _bool(s: str) -> bool:
    t = s.strip().lower()
    if t in ("true", "1", "yes", "on"):
        return True
    if t in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


CONFIG_KEYS = {
    "snr_db": _float_list,
    "decoders": _str_list,
    "delays": _float_list,
    "gamma": float,
    "gamma_lo": float,
    "gamma_hi": float,
    "probe_kind": str,
    "probe_order": str,
    "probe_len": int,
    "info_len": int,
    "seed": int,
    "min_bits": int,
    "min_errors": int,
    "max_bits": _opt_int,
    "retune": str,
    "refit": str,
    "snr_axis": str,
    "svm_c": float,
    "svm_gamma": float,
    "svm_tol": float,
    "svm_max_iter": int,
    "kernel_cache_limit": int,
    "scale": _bool,
    "ga_population": int,
    "ga_generations": int,
    "ga_crossover_rate": float,
    "ga_mutation_rate": float,
    "ga_mutation_sigma": float,
    "ga_elite": int,
    "ga_tournament": int,
    "ga_cv_folds": int,
    "ga_c_lo": float,
    "ga_c_hi": float,
    "ga_g_lo": float,
    "ga_g_hi": float,
    "beta": float,
    "f": float,
    "n_p": int,
    "n_r": int,
}


def parse_config_file(path: str) -> dict[str, str]:
    """Read `key = value` lines; '#' starts a comment, blank lines ignored."""
    raw: dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                stripped = line.split("#", 1)[0].strip()
                if not stripped:
                    continue
                if "=" not in stripped:
                    raise ValueError(f"{path}:{lineno}: expected key = value")
                key, _, value = stripped.partition("=")
                raw[key.strip()] = value.strip()
    except OSError as exc:
        raise OSError(f"reading config {path!r}: {exc}") from exc
    return raw


def make_sim_config(raw: dict[str, str]) -> SimConfig:
    """Build a SimConfig from flat string settings (file plus CLI overrides)."""
    unknown = sorted(set(raw) - set(CONFIG_KEYS))
    if unknown:
        raise ValueError(
            f"unknown config keys {unknown}; valid keys: {sorted(CONFIG_KEYS)}"
        )
    vals = {k: CONFIG_KEYS[k](v) for k, v in raw.items()}

    def pick(mapping: dict[str, str]) -> dict:
        return {
            field_name: vals[key]
            for key, field_name in mapping.items()
            if key in vals
        }

    basis = BasisParams(**pick({"beta": "beta", "f": "f", "n_p": "n_p", "n_r": "n_r"}))
    frame = FrameConfig(
        **pick(
            {
                "probe_kind": "probe_kind",
                "probe_len": "probe_len",
                "info_len": "info_len",
                "probe_order": "probe_order",
            }
        )
    )
    ga = GaConfig(
        **pick(
            {
                "ga_population": "population_size",
                "ga_generations": "generations",
                "ga_crossover_rate": "crossover_rate",
                "ga_mutation_rate": "mutation_rate",
                "ga_mutation_sigma": "mutation_sigma",
                "ga_elite": "elite_count",
                "ga_tournament": "tournament_size",
                "ga_cv_folds": "cv_folds",
            }
        )
    )
    if "ga_c_lo" in vals or "ga_c_hi" in vals:
        lo, hi = ga.c_range_log2
        ga = replace(ga, c_range_log2=(vals.get("ga_c_lo", lo), vals.get("ga_c_hi", hi)))
    if "ga_g_lo" in vals or "ga_g_hi" in vals:
        lo, hi = ga.g_range_log2
        ga = replace(ga, g_range_log2=(vals.get("ga_g_lo", lo), vals.get("ga_g_hi", hi)))

    if ("svm_c" in vals) != ("svm_gamma" in vals):
        raise ValueError("svm_c and svm_gamma must be given together")
    fixed = (
        SvmHyper(c=vals["svm_c"], gamma=vals["svm_gamma"]) if "svm_c" in vals else None
    )

    if "snr_db" not in vals:
        raise ValueError("config needs snr_db (comma-separated dB values)")
    kwargs: dict = {
        "snr_points": vals["snr_db"],
        "frame": frame,
        "basis": basis,
        "ga": ga,
        "fixed_hyper": fixed,
    }
    direct = {
        "decoders": "decoders",
        "delays": "delays",
        "gamma": "gamma",
        "seed": "seed",
        "min_bits": "min_bits",
        "min_errors": "min_errors",
        "max_bits": "max_bits",
        "retune": "retune",
        "refit": "refit",
        "snr_axis": "snr_axis",
        "svm_tol": "svm_tol",
        "svm_max_iter": "svm_max_iter",
        "kernel_cache_limit": "kernel_cache_limit",
        "scale": "scale",
    }
    kwargs.update(pick(direct))
    if "gamma_lo" in vals or "gamma_hi" in vals:
        lo = vals.get("gamma_lo", 0.3)
        hi = vals.get("gamma_hi", 0.9)
        kwargs["gamma_range"] = (lo, hi)
    return SimConfig(**kwargs)
