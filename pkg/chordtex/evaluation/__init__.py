from chordtex.evaluation.reports import (
    AGREEMENT_COLUMNS,
    ChordAgreement,
    ReconstructionReport,
    chord_agreement,
    overall_root_accuracy,
    plot_deltas,
    reconstruction_report,
    reports_frame,
    write_agreement_csv,
    write_reports_csv,
)
from chordtex.evaluation.sweeps import (
    DEFAULT_PROBABILITIES,
    DEFAULT_SHIFTS,
    DeltaReport,
    delta_sweep_perturb,
    delta_sweep_transpose,
    encode_means,
    segment_rng,
)

__all__ = [
    "AGREEMENT_COLUMNS", "ChordAgreement", "DEFAULT_PROBABILITIES", "DEFAULT_SHIFTS", "DeltaReport",
    "ReconstructionReport", "chord_agreement", "delta_sweep_perturb", "delta_sweep_transpose", "encode_means",
    "overall_root_accuracy", "plot_deltas", "reconstruction_report", "reports_frame", "segment_rng",
    "write_agreement_csv", "write_reports_csv",
]
