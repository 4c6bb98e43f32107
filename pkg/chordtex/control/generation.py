# -*- coding: utf-8 -*-
"""
Kontrollü üretim
================

Tüm işlemler korunan faktör için sonsal ortalamayı kullanır.

- style_transfer: birim k için [z_chd(b_k), z_txt(a_k)] çözülür
- vary_texture_posterior: z_chd sabit, z_txt sonsaldan n kez örneklenir
- vary_texture_prior: z_chd verilen akor dizisinden, z_txt ~ N(0, I)
- transfer_from_pool: x'in akorları, havuzdan rastgele seçilen n dokuyla
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import torch

from chordtex.chords.extract import ChordProgression, ExtractionMode
from chordtex.errors import LengthMismatchError
from chordtex.model.batch import make_batch
from chordtex.model.vae import ChordTextureVAE
from chordtex.score.segmentation import quantize_and_segment
from chordtex.score.types import SEGMENT_BEATS, Segment, Song

logger = logging.getLogger(__name__)


@dataclass
class LatentPair:
    z_chd: torch.Tensor
    z_txt: torch.Tensor
    chord_source: str
    texture_source: str

    def __post_init__(self) -> None:
        if not (torch.isfinite(self.z_chd).all() and torch.isfinite(self.z_txt).all()):
            raise ValueError("latent pair must be finite")


def split_into_units(song: Song, offset_beats: int = 0, tracks: Optional[Sequence[str]] = None) -> List[Segment]:
    """Örtüşmesiz 8 vuruşluk birimler (4/4'te 2 ölçü, 2/4'te 4 ölçü); artık kısım atılır."""
    return quantize_and_segment(song, hop_beats=SEGMENT_BEATS, start_beat=offset_beats, tracks=tracks)


def encode_segments(model: ChordTextureVAE, segments: Sequence[Segment],
                    chord_mode: str = ExtractionMode.SOUNDING) -> List[LatentPair]:
    if not segments:
        return []
    z_chd, z_txt = model.encode_means(segments, chord_mode)
    return [LatentPair(z_chd[i], z_txt[i], seg.segment_id, seg.segment_id) for i, seg in enumerate(segments)]


def decode_pairs(model: ChordTextureVAE, pairs: Sequence[LatentPair],
                 sources: Optional[Sequence[Segment]] = None) -> List[Segment]:
    if not pairs:
        return []
    z_chd = torch.stack([p.z_chd for p in pairs])
    z_txt = torch.stack([p.z_txt for p in pairs])
    return model.decode_segments(z_chd, z_txt, [s.source for s in sources] if sources else None)


def reconstruct(model: ChordTextureVAE, segments: Sequence[Segment],
                chord_mode: str = ExtractionMode.SOUNDING) -> List[Segment]:
    return model.reconstruct(segments, chord_mode)


def style_transfer(piece_a: Sequence[Segment], piece_b: Sequence[Segment], model: ChordTextureVAE,
                   chord_mode: str = ExtractionMode.SOUNDING) -> List[Segment]:
    """a'nın dokusu + b'nin akorları; çıktı a'nın birim konumlarını taşır."""
    if len(piece_a) != len(piece_b):
        raise LengthMismatchError(f"Pieces have {len(piece_a)} and {len(piece_b)} units")
    if not piece_a:
        return []
    _, z_txt_a = model.encode_means(piece_a, chord_mode)
    z_chd_b, _ = model.encode_means(piece_b, chord_mode)
    return model.decode_segments(z_chd_b, z_txt_a, [s.source for s in piece_a])


def vary_texture_posterior(x: Segment, model: ChordTextureVAE, generator: torch.Generator, n: int,
                           chord_mode: str = ExtractionMode.SOUNDING) -> List[Segment]:
    if n <= 0:
        return []
    batch = make_batch([x], chord_mode, model.config.max_notes).to(model.device, model.dtype)
    with torch.no_grad():
        z_chd = model.encode_chord(batch.chord).mean.expand(n, -1)
        lat = model.encode_texture(batch.roll)
    eps = torch.randn((n, lat.dim), generator=generator, dtype=lat.mean.dtype).to(model.device)
    z_txt = lat.mean + torch.exp(0.5 * lat.log_variance) * eps
    return model.decode_segments(z_chd, z_txt, [x.source] * n)


def vary_texture_prior(prog: ChordProgression, model: ChordTextureVAE, generator: torch.Generator,
                       n: int, song_id: str = "prior", start_beat: int = 0) -> List[Segment]:
    """Her çıktı bağımsız bir önsel örnektir."""
    if n <= 0:
        return []
    z_chd = model.encode_progressions([prog]).expand(n, -1)
    z_txt = torch.randn((n, model.config.z_txt_dim), generator=generator, dtype=model.dtype).to(model.device)
    return model.decode_segments(z_chd, z_txt, [(song_id, start_beat)] * n)


def transfer_from_pool(x: Segment, pool: Sequence[Segment], model: ChordTextureVAE, rng: np.random.Generator,
                       n: int, chord_mode: str = ExtractionMode.SOUNDING) -> List[Segment]:
    """x'in akor gizilini havuzdan seçilen n segmentin doku gizilleriyle birleştirir."""
    if n <= 0:
        return []
    if not pool:
        raise LengthMismatchError("Texture pool is empty")
    replace = n > len(pool)
    if replace:
        logger.warning(f"Pool has {len(pool)} segments for {n} transfers; sampling with replacement")
    picks = rng.choice(len(pool), size=n, replace=replace)
    z_chd, _ = model.encode_means([x], chord_mode)
    _, z_txt = model.encode_means([pool[int(i)] for i in picks], chord_mode)
    return model.decode_segments(z_chd.expand(n, -1), z_txt, [x.source] * n)
