# -*- coding: utf-8 -*-
"""
Augmentasyonla ayrışma ölçümü
=============================

Her augmentasyon parametresi için test segmentleri dönüştürülür, yeniden
kodlanır ve sonsal ortalamaların L1 değişimi (256 boyut üzerinden toplam)
segment başına ortalanır; toplam da raporlanır.

- transpose: F_i, i = 1..12
- pitch_perturb: P_i (vuruş bazlı +-1 yarım ton), i = 0.0..1.0
- rhythm_halve: R_i (nota süresi yarılama); akor tarafı yalnızca onset
  kipinde hesaplanır ve sıfır olmak zorundadır. Karşılaştırma için sounding
  kipinde de ayrı satırlar üretilir.
"""

import hashlib
import logging
from typing import Callable, List, Sequence, Tuple

import numpy as np
import torch
from pydantic import BaseModel, Field

from chordtex.chords.extract import ExtractionMode
from chordtex.errors import EmptyTestSetError, EvaluationError
from chordtex.model.vae import ChordTextureVAE
from chordtex.score.augment import halve_durations, perturb_pitch, transpose
from chordtex.score.types import Segment

logger = logging.getLogger(__name__)

TRANSPOSE = "transpose"
PITCH_PERTURB = "pitch_perturb"
RHYTHM_HALVE = "rhythm_halve"

DEFAULT_SHIFTS = tuple(range(1, 13))
DEFAULT_PROBABILITIES = tuple(round(0.1 * k, 1) for k in range(11))


class DeltaReport(BaseModel):
    augmentation: str
    parameter: float
    chord_mode: str
    mean_delta_chd: float = Field(..., ge=0)
    mean_delta_txt: float = Field(..., ge=0)
    total_delta_chd: float = Field(..., ge=0)
    total_delta_txt: float = Field(..., ge=0)
    segment_count: int = Field(..., ge=1)


def encode_means(model: ChordTextureVAE, segments: Sequence[Segment], chord_mode: str,
                 chunk_size: int = 256) -> Tuple[np.ndarray, np.ndarray]:
    """Sabit boyutlu parçalar halinde sonsal ortalamalar (N, D) x 2."""
    model.eval()
    chd, txt = [], []
    for start in range(0, len(segments), chunk_size):
        z_chd, z_txt = model.encode_means(segments[start:start + chunk_size], chord_mode)
        chd.append(z_chd.double().cpu().numpy())
        txt.append(z_txt.double().cpu().numpy())
    return np.concatenate(chd), np.concatenate(txt)


def segment_rng(seg: Segment, tag: str, value: float, base_seed: int = 0) -> np.random.Generator:
    """Segment kimliğinden türetilen tekrarlanabilir üreteç."""
    key = f"{seg.song_id}|{seg.start_beat}|{tag}|{value:.6f}".encode("utf-8")
    digest = int(hashlib.sha256(key).hexdigest()[:16], 16)
    return np.random.default_rng([base_seed, digest])


def _report(augmentation: str, parameter: float, chord_mode: str,
            base: Tuple[np.ndarray, np.ndarray], moved: Tuple[np.ndarray, np.ndarray]) -> DeltaReport:
    d_chd = np.abs(moved[0] - base[0]).sum(axis=1)
    d_txt = np.abs(moved[1] - base[1]).sum(axis=1)
    if not (np.isfinite(d_chd).all() and np.isfinite(d_txt).all()):
        raise EvaluationError(f"Non-finite latent delta for {augmentation} at {parameter}")
    return DeltaReport(
        augmentation=augmentation, parameter=float(parameter), chord_mode=str(ExtractionMode(chord_mode).value),
        mean_delta_chd=float(d_chd.mean()), mean_delta_txt=float(d_txt.mean()),
        total_delta_chd=float(d_chd.sum()), total_delta_txt=float(d_txt.sum()),
        segment_count=len(d_chd),
    )


def _require(testset: Sequence[Segment]) -> None:
    if not testset:
        logger.error("Test set is empty")
        raise EmptyTestSetError("empty test set")


def delta_sweep_transpose(model: ChordTextureVAE, testset: Sequence[Segment],
                          chord_mode: str = ExtractionMode.SOUNDING,
                          shifts: Sequence[int] = DEFAULT_SHIFTS) -> List[DeltaReport]:
    _require(testset)
    base = encode_means(model, testset, chord_mode)
    reports = []
    for i in shifts:
        moved = encode_means(model, [transpose(s, i) for s in testset], chord_mode)
        reports.append(_report(TRANSPOSE, i, chord_mode, base, moved))
        logger.info(f"F_{i}: dz_chd {reports[-1].mean_delta_chd:.3f}, dz_txt {reports[-1].mean_delta_txt:.3f}")
    return reports


def _augmented(testset: Sequence[Segment], op: Callable, tag: str, prob: float, base_seed: int) -> List[Segment]:
    return [op(s, prob, segment_rng(s, tag, prob, base_seed)) for s in testset]


def delta_sweep_perturb(model: ChordTextureVAE, testset: Sequence[Segment],
                        probabilities: Sequence[float] = DEFAULT_PROBABILITIES, base_seed: int = 0,
                        chord_mode: str = ExtractionMode.SOUNDING) -> List[DeltaReport]:
    """P_i ve R_i serileri. R_i akor değişimi onset kipinde sıfır değilse EvaluationError."""
    _require(testset)
    base = encode_means(model, testset, chord_mode)
    base_onset = encode_means(model, testset, ExtractionMode.ONSET_ONLY)
    base_sounding = base if ExtractionMode(chord_mode) == ExtractionMode.SOUNDING else \
        encode_means(model, testset, ExtractionMode.SOUNDING)

    reports = []
    for prob in probabilities:
        perturbed = _augmented(testset, perturb_pitch, "P", prob, base_seed)
        reports.append(_report(PITCH_PERTURB, prob, chord_mode, base, encode_means(model, perturbed, chord_mode)))

        halved = _augmented(testset, halve_durations, "R", prob, base_seed)
        onset_report = _report(RHYTHM_HALVE, prob, ExtractionMode.ONSET_ONLY, base_onset,
                               encode_means(model, halved, ExtractionMode.ONSET_ONLY))
        if onset_report.total_delta_chd != 0.0:
            logger.error(f"R_{prob}: chord latent moved under onset-only extraction")
            raise EvaluationError(f"Chord latent changed under duration halving (R_{prob}) in onset_only mode")
        reports.append(onset_report)
        reports.append(_report(RHYTHM_HALVE, prob, ExtractionMode.SOUNDING, base_sounding,
                               encode_means(model, halved, ExtractionMode.SOUNDING)))
        logger.info(f"P/R {prob}: dz_chd(P) {reports[-3].mean_delta_chd:.3f}, dz_txt(P) {reports[-3].mean_delta_txt:.3f}, "
                    f"dz_txt(R) {onset_report.mean_delta_txt:.3f}")
    return reports
