# -*- coding: utf-8 -*-
"""
Melodiye eşlik düzenleme
========================

Melodi ya 8 vuruşluk Segment birimleri ya da önceden hesaplanmış birim
gömmeleri (`MelodyUnitEmbedding`, ör. `embed_melody` çıktısı veya dış bir
gömücü) olarak verilir. Verilen akorlar akor yuvalarını, verilen eşlik öneki
ise ilk birimlerin akor ve doku yuvalarını zorlar (verilen akorlar önekin
akorlarından önceliklidir). Sonuç her birimin [z_chd, z_txt] vektörünün
PianoTree çözümüdür.
"""

import logging
from typing import List, Optional, Sequence, Tuple, Union

import torch

from chordtex.arranger.melody import MelodyUnitEmbedding, melody_inputs
from chordtex.arranger.model import ArrangerModel
from chordtex.chords.extract import ChordProgression, ExtractionMode
from chordtex.errors import DataError, LengthMismatchError, PrefixTooLongError
from chordtex.model.vae import ChordTextureVAE
from chordtex.score.types import SEGMENT_BEATS, Segment

logger = logging.getLogger(__name__)

MelodyUnit = Union[Segment, MelodyUnitEmbedding]


def _melody_latents(melody: Sequence[MelodyUnit], model: ArrangerModel) -> Tuple[torch.Tensor, torch.Tensor]:
    """(1, U, D) z_p, z_r; Segment birimleri modelin kendi gömücüsünden geçer."""
    param = next(model.parameters())
    if all(isinstance(u, Segment) for u in melody):
        pitch, rhythm = melody_inputs(melody)
        return model.embed(pitch.unsqueeze(0).to(param.device, param.dtype),
                           rhythm.unsqueeze(0).to(param.device, param.dtype))
    if not all(isinstance(u, MelodyUnitEmbedding) for u in melody):
        raise DataError("Melody units must be all Segments or all MelodyUnitEmbeddings")
    expected = model.embedder.out_dim
    for u in melody:
        if u.z_p.shape != (expected,) or u.z_r.shape != (expected,):
            raise DataError(f"Melody embedding shapes {tuple(u.z_p.shape)}/{tuple(u.z_r.shape)}, "
                            f"arranger expects ({expected},)")
    z_p = torch.stack([u.z_p for u in melody]).to(param.device, param.dtype)
    z_r = torch.stack([u.z_r for u in melody]).to(param.device, param.dtype)
    return z_p.unsqueeze(0), z_r.unsqueeze(0)


@torch.no_grad()
def arrange(melody_units: Sequence[MelodyUnit], model: ArrangerModel, vae: ChordTextureVAE,
            given_chords: Optional[Sequence[ChordProgression]] = None,
            given_prefix: Optional[Sequence[Segment]] = None,
            chord_mode: str = ExtractionMode.SOUNDING) -> List[Segment]:
    units = len(melody_units)
    if units == 0:
        return []
    if units > model.config.max_positions:
        raise LengthMismatchError(f"{units} units exceed the arranger window of {model.config.max_positions}")
    prefix = list(given_prefix or [])
    if len(prefix) > units:
        raise PrefixTooLongError(f"Prefix has {len(prefix)} units, melody has {units}")
    if given_chords is not None and len(given_chords) != units:
        raise LengthMismatchError(f"{len(given_chords)} chord progressions for {units} melody units")

    model.eval()
    z_p, z_r = _melody_latents(melody_units, model)

    arr = model.arranger
    device, dtype = z_p.device, z_p.dtype
    forced_chd = z_p.new_zeros(1, units, arr.z_chd_dim)
    forced_txt = z_p.new_zeros(1, units, arr.z_txt_dim)
    chd_mask = torch.zeros(units, dtype=torch.bool)
    txt_mask = torch.zeros(units, dtype=torch.bool)

    if prefix:
        p_chd, p_txt = vae.encode_means(prefix, chord_mode)
        forced_chd[0, :len(prefix)] = p_chd.to(device, dtype)
        forced_txt[0, :len(prefix)] = p_txt.to(device, dtype)
        chd_mask[:len(prefix)] = True
        txt_mask[:len(prefix)] = True
    if given_chords is not None:
        forced_chd[0] = vae.encode_progressions(given_chords).to(device, dtype)
        chd_mask[:] = True

    predicted = int((~chd_mask).sum() + (~txt_mask).sum())
    logger.info(f"Arranging {units} units; {predicted} of {2 * units} latent slots predicted")
    z_chd, z_txt = arr.generate(z_p, z_r, forced_chd, chd_mask, forced_txt, txt_mask)
    z_chd = z_chd[0].to(vae.device, vae.dtype)
    z_txt = z_txt[0].to(vae.device, vae.dtype)
    sources = [u.source if isinstance(u, Segment) else ("melody", SEGMENT_BEATS * i)
               for i, u in enumerate(melody_units)]
    return vae.decode_segments(z_chd, z_txt, sources)
