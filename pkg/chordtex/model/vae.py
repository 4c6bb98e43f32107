# -*- coding: utf-8 -*-
"""
Akor / doku ayrıştırmalı VAE
============================

Gizil uzay iki parçadır: z_chd (akor) ve z_txt (doku). PianoTree çözücüsü her
yerde [z_chd, z_txt] sırasıyla birleştirilmiş vektörü alır.

Kayıp (batch ortalaması):
    toplam = akor_rek + pianotree_rek + kl_ağırlığı * (KL_chd + KL_txt)
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import torch
import torch.nn.functional as F
from torch import nn

from chordtex.chords.extract import ChordProgression, ExtractionMode, progression_matrices
from chordtex.errors import TrainingDivergenceError
from chordtex.model.batch import VAEBatch, make_batch
from chordtex.model.config import ModelConfig
from chordtex.model.decoders import ChordDecoder, ChordDecoderOutput, PianoTreeDecoder, PianoTreeOutput
from chordtex.model.encoders import ChordEncoder, GaussianLatent, TextureEncoder, reparameterize
from chordtex.model.pianotree import IGNORE_INDEX, PianoTree
from chordtex.score.types import PITCH_COUNT, Segment

logger = logging.getLogger(__name__)


@dataclass
class VAEOutput:
    chord_latent: GaussianLatent
    texture_latent: GaussianLatent
    chord: ChordDecoderOutput
    tree: PianoTreeOutput


@dataclass
class LossComponents:
    chord: torch.Tensor
    pianotree: torch.Tensor
    kl_chd: torch.Tensor
    kl_txt: torch.Tensor
    total: torch.Tensor

    def as_dict(self) -> Dict[str, float]:
        return {
            "chord_loss": float(self.chord),
            "pianotree_loss": float(self.pianotree),
            "kl_chd": float(self.kl_chd),
            "kl_txt": float(self.kl_txt),
            "total_loss": float(self.total),
        }


class ChordTextureVAE(nn.Module):
    def __init__(self, config: Optional[ModelConfig] = None) -> None:
        super().__init__()
        self.config = config or ModelConfig()
        cfg = self.config
        self.chord_encoder = ChordEncoder(cfg.chord_enc_hidden, cfg.z_chd_dim)
        self.texture_encoder = TextureEncoder(cfg.texture_enc_hidden, cfg.z_txt_dim, cfg.conv_channels)
        self.chord_decoder = ChordDecoder(cfg.z_chd_dim, cfg.chord_dec_hidden)
        self.pianotree_decoder = PianoTreeDecoder(cfg)

    @property
    def device(self) -> torch.device:
        return next(self.parameters()).device

    @property
    def dtype(self) -> torch.dtype:
        return next(self.parameters()).dtype

    # ---------- Temel işlemler ----------
    def encode_chord(self, chord: torch.Tensor) -> GaussianLatent:
        return self.chord_encoder(chord)

    def encode_texture(self, roll: torch.Tensor) -> GaussianLatent:
        return self.texture_encoder(roll)

    def decode_chord(self, z_chd: torch.Tensor) -> ChordDecoderOutput:
        return self.chord_decoder(z_chd)

    def decode_pianotree(self, z: torch.Tensor, pitch: Optional[torch.Tensor] = None,
                         bits: Optional[torch.Tensor] = None):
        """Hedef verilirse öğretmen zorlamalı logit'ler, yoksa açgözlü PianoTree listesi."""
        if z.shape[-1] != self.config.z_dim:
            raise ValueError(f"latent must have {self.config.z_dim} dims, got {z.shape[-1]}")
        if pitch is None:
            return self.pianotree_decoder.greedy(z)
        return self.pianotree_decoder(z, pitch, bits)

    def forward(self, batch: VAEBatch, generator: Optional[torch.Generator] = None,
                sample: bool = True) -> VAEOutput:
        chord_lat = self.encode_chord(batch.chord)
        texture_lat = self.encode_texture(batch.roll)
        if sample:
            z_chd = reparameterize(chord_lat, generator)
            z_txt = reparameterize(texture_lat, generator)
        else:
            z_chd, z_txt = chord_lat.mean, texture_lat.mean
        chord_out = self.decode_chord(z_chd)
        tree_out = self.decode_pianotree(torch.cat([z_chd, z_txt], dim=-1), batch.pitch, batch.bits)
        return VAEOutput(chord_lat, texture_lat, chord_out, tree_out)

    # ---------- Değerlendirme modu yardımcıları (sonsal ortalama) ----------
    @torch.no_grad()
    def encode_means(self, segments: Sequence[Segment], chord_mode: str = ExtractionMode.SOUNDING
                     ) -> Tuple[torch.Tensor, torch.Tensor]:
        batch = make_batch(segments, chord_mode, self.config.max_notes).to(self.device, self.dtype)
        return self.encode_chord(batch.chord).mean, self.encode_texture(batch.roll).mean

    @torch.no_grad()
    def encode_progressions(self, progressions: Sequence[ChordProgression]) -> torch.Tensor:
        mats = torch.from_numpy(progression_matrices(progressions)).to(self.device, self.dtype)
        return self.encode_chord(mats).mean

    @torch.no_grad()
    def decode_segments(self, z_chd: torch.Tensor, z_txt: torch.Tensor,
                        sources: Optional[Sequence[Tuple[str, int]]] = None) -> List[Segment]:
        trees: List[PianoTree] = self.decode_pianotree(torch.cat([z_chd, z_txt], dim=-1))
        sources = sources or [("", 0)] * len(trees)
        return [tree.to_segment(song_id, start) for tree, (song_id, start) in zip(trees, sources)]

    def reconstruct(self, segments: Sequence[Segment], chord_mode: str = ExtractionMode.SOUNDING) -> List[Segment]:
        if not segments:
            return []
        z_chd, z_txt = self.encode_means(segments, chord_mode)
        return self.decode_segments(z_chd, z_txt, [s.source for s in segments])


# ---------- Kayıplar ----------
def kl_divergence(lat: GaussianLatent) -> torch.Tensor:
    """Standart normal önsele karşı kapalı form KL, boyutlar üzerinden toplam -> (B,)."""
    mean, logvar = lat.mean, lat.log_variance
    return 0.5 * (mean.pow(2) + logvar.exp() - 1.0 - logvar).sum(-1)


def chord_loss(out: ChordDecoderOutput, chord: torch.Tensor) -> torch.Tensor:
    """Vuruşlar üzerinden toplam: CE(kök) + CE(bas) + BCE(chroma, 12 kutu toplamı) -> (B,)."""
    b = chord.shape[0]
    root_target = chord[:, 0:12].argmax(1)     # (B, 8)
    bass_target = chord[:, 12:24].argmax(1)
    chroma_target = chord[:, 24:36].transpose(1, 2)  # (B, 8, 12)
    root = F.cross_entropy(out.root.reshape(-1, 12), root_target.reshape(-1), reduction="none").reshape(b, -1)
    bass = F.cross_entropy(out.bass.reshape(-1, 12), bass_target.reshape(-1), reduction="none").reshape(b, -1)
    chroma = F.binary_cross_entropy_with_logits(out.chroma, chroma_target, reduction="none").sum(-1)
    return (root + bass + chroma).sum(-1)


def pianotree_loss(out: PianoTreeOutput, pitch: torch.Tensor, bits: torch.Tensor) -> torch.Tensor:
    """Perde CE + nota konumlarında süre-biti BCE, notalar üzerinden toplam -> (B,)."""
    b = pitch.shape[0]
    pitch_ce = F.cross_entropy(
        out.pitch_logits.reshape(-1, out.pitch_logits.shape[-1]), pitch.reshape(-1),
        ignore_index=IGNORE_INDEX, reduction="none",
    ).reshape(b, -1).sum(-1)
    note_mask = ((pitch >= 0) & (pitch < PITCH_COUNT)).to(bits.dtype).unsqueeze(-1)
    dur_bce = F.binary_cross_entropy_with_logits(out.duration_logits, bits, reduction="none")
    return pitch_ce + (dur_bce * note_mask).reshape(b, -1).sum(-1)


def compute_loss(model: ChordTextureVAE, batch: VAEBatch, kl_weight: float = 0.0,
                 generator: Optional[torch.Generator] = None, batch_id: str = "") -> LossComponents:
    if not 0.0 <= kl_weight <= 0.1 + 1e-12:
        raise ValueError(f"kl_weight must be in [0, 0.1], got {kl_weight}")
    out = model(batch, generator=generator)
    chord = chord_loss(out.chord, batch.chord).mean()
    tree = pianotree_loss(out.tree, batch.pitch, batch.bits).mean()
    kl_chd = kl_divergence(out.chord_latent).mean()
    kl_txt = kl_divergence(out.texture_latent).mean()
    total = chord + tree + kl_weight * (kl_chd + kl_txt)
    if not math.isfinite(float(total.detach())):
        logger.error(f"Non-finite loss on batch {batch_id}")
        raise TrainingDivergenceError(batch_id)
    return LossComponents(chord, tree, kl_chd, kl_txt, total)


def teacher_forced_accuracy(model: ChordTextureVAE, batch: VAEBatch) -> Dict[str, np.ndarray]:
    """Sonsal ortalamalarla öğretmen zorlamalı tahminler; doğru/yanlış dizileri döndürür."""
    with torch.no_grad():
        out = model(batch, sample=False)
    pitch = batch.pitch
    valid = pitch != IGNORE_INDEX
    pitch_hit = (out.tree.pitch_logits.argmax(-1) == pitch)[valid]
    notes = (pitch >= 0) & (pitch < PITCH_COUNT)
    bit_hit = ((out.tree.duration_logits > 0).to(batch.bits.dtype) == batch.bits)[notes]
    root_hit = out.chord.root.argmax(-1) == batch.chord[:, 0:12].argmax(1)
    bass_hit = out.chord.bass.argmax(-1) == batch.chord[:, 12:24].argmax(1)
    return {
        "pitch": pitch_hit.cpu().numpy().ravel(),
        "duration_bits": bit_hit.cpu().numpy().ravel(),
        "root": root_hit.cpu().numpy().ravel(),
        "bass": bass_hit.cpu().numpy().ravel(),
        "chroma_pred": (out.chord.chroma > 0).cpu().numpy().reshape(-1, 12).astype(int),
        "chroma_true": batch.chord[:, 24:36].transpose(1, 2).cpu().numpy().reshape(-1, 12).astype(int),
    }
