# -*- coding: utf-8 -*-
"""Rapor çıktıları (CSV, grafik), yeniden kurma ve akor uyumu metrikleri."""

import logging
import os
from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np
import pandas as pd
from pydantic import BaseModel, Field
from sklearn.metrics import f1_score

from chordtex.chords.extract import ChordProgression, ExtractionMode, extract_progression
from chordtex.errors import EmptyTestSetError, LengthMismatchError
from chordtex.evaluation.sweeps import PITCH_PERTURB, RHYTHM_HALVE, TRANSPOSE, DeltaReport
from chordtex.model.batch import make_batch
from chordtex.model.vae import ChordTextureVAE, teacher_forced_accuracy
from chordtex.score.types import Segment

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["augmentation", "parameter", "factor", "chord_mode", "mean_delta", "total_delta", "segment_count"]


class ReconstructionReport(BaseModel):
    pitch_accuracy: float = Field(..., ge=0, le=1)
    duration_bit_accuracy: float = Field(..., ge=0, le=1)
    root_accuracy: float = Field(..., ge=0, le=1)
    bass_accuracy: float = Field(..., ge=0, le=1)
    chroma_f1: float = Field(..., ge=0, le=1)
    segment_count: int


def reports_frame(reports: Sequence[DeltaReport]) -> pd.DataFrame:
    """Her (augmentasyon, parametre, faktör) için bir satır."""
    rows = []
    for r in reports:
        for factor, mean, total in (("chord", r.mean_delta_chd, r.total_delta_chd),
                                    ("texture", r.mean_delta_txt, r.total_delta_txt)):
            rows.append({"augmentation": r.augmentation, "parameter": r.parameter, "factor": factor,
                         "chord_mode": r.chord_mode, "mean_delta": mean, "total_delta": total,
                         "segment_count": r.segment_count})
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_reports_csv(reports: Sequence[DeltaReport], path: str) -> pd.DataFrame:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    df = reports_frame(reports)
    df.to_csv(path, index=False, encoding="utf-8")
    logger.info(f"Wrote {len(df)} report rows to {path}")
    return df


def plot_deltas(reports: Sequence[DeltaReport], path: str) -> str:
    """Sol: transpozisyon; sağ: P_i / R_i olasılık taraması."""
    df = reports_frame(reports)
    fig, axes = plt.subplots(1, 2, figsize=(12, 4.5))

    tr = df[df["augmentation"] == TRANSPOSE]
    for factor, marker in (("chord", "o"), ("texture", "s")):
        part = tr[tr["factor"] == factor].sort_values("parameter")
        axes[0].plot(part["parameter"], part["mean_delta"], marker=marker, label=f"z_{factor[:3]}")
    axes[0].set_xlabel("transposition (semitones)")
    axes[0].set_ylabel("mean sum |dz|")
    axes[0].legend()

    series = (
        (PITCH_PERTURB, "chord", ExtractionMode.SOUNDING.value, "z_chd (pitch)"),
        (PITCH_PERTURB, "texture", ExtractionMode.SOUNDING.value, "z_txt (pitch)"),
        (RHYTHM_HALVE, "texture", ExtractionMode.ONSET_ONLY.value, "z_txt (rhythm)"),
        (RHYTHM_HALVE, "chord", ExtractionMode.ONSET_ONLY.value, "z_chd (rhythm)"),
    )
    for aug, factor, mode, label in series:
        part = df[(df["augmentation"] == aug) & (df["factor"] == factor) & (df["chord_mode"] == mode)]
        if not part.empty:
            part = part.sort_values("parameter")
            axes[1].plot(part["parameter"], part["mean_delta"], marker="o", label=label)
    axes[1].set_xlabel("augmentation probability")
    axes[1].legend()

    plt.tight_layout()
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    plt.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def reconstruction_report(model: ChordTextureVAE, testset: Sequence[Segment],
                          chord_mode: str = ExtractionMode.SOUNDING, batch_size: int = 64) -> ReconstructionReport:
    if not testset:
        raise EmptyTestSetError("empty test set")
    model.eval()
    parts = {"pitch": [], "duration_bits": [], "root": [], "bass": [], "chroma_pred": [], "chroma_true": []}
    for start in range(0, len(testset), batch_size):
        batch = make_batch(testset[start:start + batch_size], chord_mode, model.config.max_notes)
        hits = teacher_forced_accuracy(model, batch.to(model.device, model.dtype))
        for key, value in hits.items():
            parts[key].append(value)
    joined = {k: np.concatenate(v) for k, v in parts.items()}

    def rate(key: str) -> float:
        return float(joined[key].mean()) if joined[key].size else 1.0

    chroma_f1 = f1_score(joined["chroma_true"].ravel(), joined["chroma_pred"].ravel(), zero_division=1.0)
    report = ReconstructionReport(
        pitch_accuracy=rate("pitch"), duration_bit_accuracy=rate("duration_bits"),
        root_accuracy=rate("root"), bass_accuracy=rate("bass"), chroma_f1=float(chroma_f1),
        segment_count=len(testset),
    )
    logger.info(f"Reconstruction: {report.model_dump()}")
    return report


# ---------- Akor kalıcılığı ----------
AGREEMENT_COLUMNS = ["source", "sample", "unit", "matched_beats", "beat_count", "root_accuracy"]


class ChordAgreement(BaseModel):
    """Üretilen birimden yeniden çıkarılan köklerin koşul köklerine uyumu."""

    source: str
    sample: int = 0
    unit: int
    matched_beats: int = Field(..., ge=0)
    beat_count: int = Field(..., gt=0)
    root_accuracy: float = Field(..., ge=0, le=1)


def chord_agreement(outputs: Sequence[Segment], progressions: Sequence[ChordProgression], source: str,
                    sample: int = 0, chord_mode: str = ExtractionMode.SOUNDING) -> List[ChordAgreement]:
    if len(outputs) != len(progressions):
        raise LengthMismatchError(f"{len(outputs)} generated units vs {len(progressions)} progressions")
    rows = []
    for unit, (seg, target) in enumerate(zip(outputs, progressions)):
        found = extract_progression(seg, chord_mode).roots
        matched = sum(a == b for a, b in zip(found, target.roots))
        rows.append(ChordAgreement(source=source, sample=sample, unit=unit, matched_beats=matched,
                                   beat_count=len(target.roots), root_accuracy=matched / len(target.roots)))
    return rows


def overall_root_accuracy(rows: Sequence[ChordAgreement]) -> float:
    beats = sum(r.beat_count for r in rows)
    return sum(r.matched_beats for r in rows) / beats if beats else 1.0


def write_agreement_csv(rows: Sequence[ChordAgreement], path: str) -> pd.DataFrame:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    df = pd.DataFrame([r.model_dump() for r in rows], columns=AGREEMENT_COLUMNS)
    df.to_csv(path, index=False, encoding="utf-8")
    logger.info(f"Wrote {len(df)} chord agreement rows to {path}; root accuracy {overall_root_accuracy(rows):.3f}")
    return df
