"""Chaotic-baseband wireless communication simulator.

Synthesizes a chaotic-shaped antipodal baseband waveform, passes it through
exponential-decay multipath with AWGN, matched-filters it, and decodes with
interference-compensating threshold detectors or a genetically tuned RBF
support-vector classifier, plus a Monte-Carlo BER harness and CLI.
"""

__version__ = "0.1.0"

from .channel import (
    MultipathChannel,
    NoiseSpec,
    add_awgn,
    draw_time_varying,
    make_exponential_channel,
    propagate,
)
from .ga_tune import GaConfig, GaResult, evolve, tune_hyperparameters
from .receiver import (
    AlignedOutput,
    FeatureScaler,
    FeatureVector,
    build_training_set,
    dump_decision_csv,
    export_feature_csv,
    extract_features,
    fit_scaler,
    matched_filter,
    sample_at_symbol,
)
from .svm_core import (
    SvmHyper,
    SvmModel,
    TrainingSet,
    cross_val_accuracy,
    load_model,
    save_model,
    train_svm,
)
from .threshold_decode import (
    DecodeState,
    IsiTable,
    ThresholdKind,
    build_isi_table,
    decode_threshold,
    exact_genie_ber,
    symbol_energy,
    theoretical_ber,
)
from .waveform import (
    BasisParams,
    SampledWaveform,
    basis_correlation,
    basis_value,
    branch_continuity_self_check,
    discrete_basis_correlation,
    generate_baseband,
    isi_coefficient,
    sampled_basis,
)
from .bench_harness import (
    BerPoint,
    FrameConfig,
    RunResult,
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
    simulate_frame,
    waveform_dump,
    write_run_manifest,
)

__all__ = [name for name in dir() if not name.startswith("_")]
