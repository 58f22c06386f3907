"""Command-line interface.

Subcommands: ``theory`` (closed-form BER curve), ``sweep`` (static-channel
BER), ``sweep-tv`` (time-varying channel), ``train-size`` (paired probe-size
comparison), ``waveform-dump`` (baseband samples), ``train`` (fit and
serialize one GA-tuned SVM).  Settings come from an optional flat
``key = value`` config file; ``--set key=value`` and the dedicated flags
override file values.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import __version__
from .bench_harness import (
    CONFIG_KEYS,
    SimConfig,
    emit_csv,
    emit_theory_curve,
    make_probe,
    make_sim_config,
    parse_config_file,
    probe_training_set,
    run_static_ber,
    run_time_varying_ber,
    run_training_size_comparison,
    run_manifest_doc,
    waveform_dump,
    write_json,
    write_run_manifest,
)
from .channel import NoiseSpec, add_awgn, make_exponential_channel, propagate
from .ga_tune import tune_hyperparameters
from .receiver import matched_filter
from .svm_core import save_model, train_svm
from .waveform import generate_baseband

log = logging.getLogger(__name__)


def _add_config_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key = value settings file")
    sub.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override any config key (repeatable); run with an invalid key to list them",
    )
    sub.add_argument("--snr", help="comma-separated SNR points in dB (= snr_db)")
    sub.add_argument("--seed", help="master seed (= seed)")
    sub.add_argument("--decoders", help="comma-separated decoder names (= decoders)")


def _gather_config(args: argparse.Namespace) -> SimConfig:
    raw: dict[str, str] = {}
    if args.config:
        raw.update(parse_config_file(args.config))
    for item in args.overrides:
        if "=" not in item:
            raise SystemExit(f"--set expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        raw[key.strip()] = value.strip()
    for key, value in (
        ("snr_db", args.snr),
        ("seed", args.seed),
        ("decoders", args.decoders),
    ):
        if value is not None:
            raw[key] = value
    try:
        return make_sim_config(raw)
    except ValueError as exc:
        raise SystemExit(str(exc)) from exc


def _report(result, out: str | None) -> None:
    for pt in result:
        theory = "" if pt.theory_ber is None else f" theory={pt.theory_ber:.4e}"
        print(
            f"snr={pt.snr_db:g} dB {pt.decoder}: ber={pt.ber:.4e} "
            f"({pt.errors}/{pt.bits}){theory}"
        )
    if out:
        print(f"wrote {out}")


def _cmd_theory(args) -> int:
    cfg = _gather_config(args)
    emit_theory_curve(cfg, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_sweep(args, time_varying: bool) -> int:
    cfg = _gather_config(args)
    result = run_time_varying_ber(cfg) if time_varying else run_static_ber(cfg)
    emit_csv(result, args.out)
    if args.manifest:
        write_run_manifest(result, cfg, args.manifest)
    _report(result, args.out)
    return 0


def _cmd_train_size(args) -> int:
    cfg = _gather_config(args)
    results = run_training_size_comparison(cfg)
    points = [pt for kind in ("All7", "All9") for pt in results[kind]]
    emit_csv(points, args.out)
    if args.manifest:
        doc = {
            "format": "cbwcs-run-manifest-pair v1",
            "runs": {
                kind: run_manifest_doc(results[kind], cfg) for kind in results
            },
        }
        write_json(doc, args.manifest)
    for kind in ("All7", "All9"):
        _report(results[kind], None)
    print(f"wrote {args.out}")
    return 0


def _parse_symbols(text: str) -> list[float]:
    text = text.strip()
    if text and "," not in text and set(text) <= {"0", "1"}:
        return [1.0 if ch == "1" else -1.0 for ch in text]
    return [float(t) for t in text.split(",") if t.strip()]


def _cmd_waveform_dump(args) -> int:
    symbols = _parse_symbols(args.symbols)
    waveform_dump(symbols, args.out)
    print(f"wrote {args.out} ({len(symbols)} symbols)")
    return 0


def _cmd_train(args) -> int:
    cfg = _gather_config(args)
    if len(cfg.snr_points) != 1:
        raise SystemExit("train expects exactly one SNR point")
    from .bench_harness import _point_noise  # single-point calibration

    snr = cfg.snr_points[0]
    sigma_n, _ = _point_noise(cfg, snr)
    rng = np.random.default_rng([cfg.seed, 0, 0, 0])
    probe = make_probe(
        cfg.frame.probe_kind, rng, length=cfg.frame.probe_len,
        order=cfg.frame.probe_order,
    )
    ch = make_exponential_channel(cfg.delays, cfg.gamma)
    x = generate_baseband(probe, cfg.basis)
    r = add_awgn(propagate(x, ch), NoiseSpec(sigma_w=sigma_n), rng=rng)
    aligned = matched_filter(r, cfg.basis)
    ts = probe_training_set(probe, aligned, scale=cfg.scale)
    if cfg.fixed_hyper is not None:
        hyper, ga = cfg.fixed_hyper, None
    else:
        ga = tune_hyperparameters(
            ts, cfg.ga, np.random.default_rng([cfg.seed, 0, 0, 1]),
            tol=cfg.svm_tol, max_iter=cfg.svm_max_iter,
        )
        hyper = ga.hyper
        print(
            f"GA best: c={hyper.c:.6g} gamma={hyper.gamma:.6g} "
            f"cv_accuracy={ga.best.fitness:.4f} ({ga.evaluations} evaluations)"
        )
    model = train_svm(
        ts, hyper, tol=cfg.svm_tol, max_iter=cfg.svm_max_iter,
        kernel_cache_limit=cfg.kernel_cache_limit,
    )
    save_model(model, args.model_out)
    print(
        f"trained on {ts.m} vectors at snr={snr:g} dB: "
        f"{model.n_support} support vectors, bias={model.bias:.6g}"
    )
    print(f"wrote {args.model_out}")
    if args.history_out:
        history = ga.history if ga is not None else []
        with open(args.history_out, "w") as fh:
            fh.write("generation,best_fitness,mean_fitness,best_log2_c,best_log2_g\n")
            for st in history:
                fh.write(
                    f"{st.generation},{st.best_fitness:.10g},{st.mean_fitness:.10g},"
                    f"{st.best_log2_c:.10g},{st.best_log2_g:.10g}\n"
                )
        print(f"wrote {args.history_out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbwcs",
        description="Chaotic-baseband communication simulator and BER harness.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default="warning",
        choices=("debug", "info", "warning", "error"),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("theory", help="closed-form BER curve over the SNR grid")
    _add_config_options(sp)
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.set_defaults(func=_cmd_theory)

    sp = subs.add_parser("sweep", help="static-channel BER sweep")
    _add_config_options(sp)
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.add_argument("--manifest", help="optional JSON run-manifest path")
    sp.set_defaults(func=lambda a: _cmd_sweep(a, time_varying=False))

    sp = subs.add_parser("sweep-tv", help="time-varying-channel BER sweep")
    _add_config_options(sp)
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.add_argument("--manifest", help="optional JSON run-manifest path")
    sp.set_defaults(func=lambda a: _cmd_sweep(a, time_varying=True))

    sp = subs.add_parser(
        "train-size", help="paired All7-vs-All9 probe-size comparison"
    )
    _add_config_options(sp)
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.add_argument("--manifest", help="optional JSON run-manifest path")
    sp.set_defaults(func=_cmd_train_size)

    sp = subs.add_parser("waveform-dump", help="noiseless baseband samples to CSV")
    sp.add_argument(
        "--symbols",
        default="1",
        help="symbols as '+1,-1,...' floats or a compact bit string like '101'",
    )
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.set_defaults(func=_cmd_waveform_dump)

    sp = subs.add_parser("train", help="fit and serialize one GA-SVM model")
    _add_config_options(sp)
    sp.add_argument("--model-out", required=True, help="model file path")
    sp.add_argument("--history-out", help="optional GA history CSV path")
    sp.set_defaults(func=_cmd_train)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
