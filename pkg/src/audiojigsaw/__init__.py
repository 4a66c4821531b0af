"""Ciphertext-only cryptanalysis of hopping-window audio scramblers.

The scrambler permutes fixed-duration segments inside every frame with a
fresh key.  This package recovers those keys from the scrambled audio
alone: segments become quantized spectrogram pieces, seam distances say
which piece plausibly follows which, and exact branch-and-bound search
reassembles each frame.
"""

from .audio_io import (
    AudioBuffer,
    VadConfig,
    WavFormatError,
    add_awgn,
    read_wav,
    synthesize_speechlike,
    vad_trim,
    write_wav,
)
from .estimator import ExtendedSegment, RlsConfig, extend_segment, rls_run
from .evaluation import AccuracyReport, accuracy, sub_block_matches, summarize_accuracy
from .pipeline import (
    AttackConfig,
    CSV_HEADER,
    FrameAttackResult,
    SweepSpec,
    attack,
    format_rows,
    sweep,
    write_results_csv,
)
from .puzzle import (
    DistanceConfig,
    arrangement_cost,
    build_distance_matrix,
    piece_distance,
    write_distance_csv,
)
from .scrambler import (
    KeySchedule,
    ScramblerConfig,
    descramble,
    invert_permutation,
    keyspace_bits,
    load_keys,
    make_key_schedule,
    save_keys,
    scramble,
)
from .solver import (
    SolveReport,
    greedy_upper_bound,
    min_arborescence_weight,
    recover_key,
    solve_bnb,
    solve_bruteforce,
)
from .spectrogram import (
    PieceImage,
    StftConfig,
    hamming_window,
    quantize_frame,
    segmented_spectrogram,
    stft_magnitude,
    window_coverage,
    write_pgm,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "AttackConfig",
    "AudioBuffer",
    "CSV_HEADER",
    "DistanceConfig",
    "ExtendedSegment",
    "FrameAttackResult",
    "KeySchedule",
    "PieceImage",
    "RlsConfig",
    "ScramblerConfig",
    "SolveReport",
    "StftConfig",
    "SweepSpec",
    "VadConfig",
    "WavFormatError",
    "accuracy",
    "add_awgn",
    "arrangement_cost",
    "attack",
    "build_distance_matrix",
    "descramble",
    "extend_segment",
    "format_rows",
    "greedy_upper_bound",
    "hamming_window",
    "invert_permutation",
    "keyspace_bits",
    "load_keys",
    "make_key_schedule",
    "min_arborescence_weight",
    "piece_distance",
    "quantize_frame",
    "read_wav",
    "recover_key",
    "rls_run",
    "save_keys",
    "scramble",
    "segmented_spectrogram",
    "solve_bnb",
    "solve_bruteforce",
    "stft_magnitude",
    "sub_block_matches",
    "summarize_accuracy",
    "sweep",
    "synthesize_speechlike",
    "vad_trim",
    "window_coverage",
    "write_distance_csv",
    "write_pgm",
    "write_results_csv",
    "write_wav",
]
