# -*- coding: utf-8 -*-
"""
Melodi birimleri ve temel melodi gömücü
=======================================

Her 8 vuruşluk monofonik birim iki girdiye çevrilir:
- perde: adım başına 130 sınıflı one-hot (0-127 onset perdesi, 128 tutma, 129 sus)
- ritim: adım başına [onset, tutma, sus, süre/32]

Temel gömücü iki GRU'dan oluşur ve (z_p, z_r) üretir. Arayüz başka bir
gömücünün (aynı imzayla) takılmasına izin verir.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import torch
from torch import nn

from chordtex.score.types import SEGMENT_STEPS, Segment

logger = logging.getLogger(__name__)

MELODY_VOCAB = 130
HOLD_TOKEN = 128
REST_TOKEN = 129
RHYTHM_FEATURES = 4


@dataclass
class MelodyUnitEmbedding:
    z_p: torch.Tensor
    z_r: torch.Tensor


def monophonize(seg: Segment) -> Tuple[Segment, bool]:
    """Aynı onsetteki notalardan en tizi tutulur; her nota bir sonraki onsette kesilir."""
    by_onset = {}
    for note in seg.notes:
        if note.onset not in by_onset or note.pitch > by_onset[note.onset].pitch:
            by_onset[note.onset] = note
    onsets = sorted(by_onset)
    notes = []
    for i, onset in enumerate(onsets):
        note = by_onset[onset]
        end = onset + note.duration
        if i + 1 < len(onsets):
            end = min(end, onsets[i + 1])
        notes.append((onset, note.pitch, end - onset))
    mono = seg.with_notes(notes)
    polyphonic = mono.notes != seg.notes
    if polyphonic:
        logger.warning(f"{seg.segment_id}: melody unit is polyphonic, keeping the highest pitch")
    return mono, polyphonic


def melody_arrays(seg: Segment) -> Tuple[np.ndarray, np.ndarray]:
    """Monofonik birim -> (token dizisi (32,), ritim özellikleri (32, 4))."""
    tokens = np.full(SEGMENT_STEPS, REST_TOKEN, dtype=np.int64)
    rhythm = np.zeros((SEGMENT_STEPS, RHYTHM_FEATURES), dtype=np.float32)
    rhythm[:, 2] = 1.0
    for note in seg.notes:
        tokens[note.onset] = note.pitch
        tokens[note.onset + 1: note.onset + note.duration] = HOLD_TOKEN
        rhythm[note.onset: note.onset + note.duration, 2] = 0.0
        rhythm[note.onset] = (1.0, 0.0, 0.0, note.duration / SEGMENT_STEPS)
        rhythm[note.onset + 1: note.onset + note.duration, 1] = 1.0
    return tokens, rhythm


def melody_inputs(units: Sequence[Segment]) -> Tuple[torch.Tensor, torch.Tensor]:
    """(U, 32, 130) perde one-hot ve (U, 32, 4) ritim tensörleri."""
    tokens, rhythms = [], []
    for unit in units:
        mono, _ = monophonize(unit)
        t, r = melody_arrays(mono)
        tokens.append(t)
        rhythms.append(r)
    token_tensor = torch.from_numpy(np.stack(tokens)) if tokens else torch.zeros((0, SEGMENT_STEPS), dtype=torch.long)
    pitch = nn.functional.one_hot(token_tensor, MELODY_VOCAB).float()
    rhythm = torch.from_numpy(np.stack(rhythms)) if rhythms else torch.zeros((0, SEGMENT_STEPS, RHYTHM_FEATURES))
    return pitch, rhythm


class MelodyEmbedder(nn.Module):
    """Birim başına (z_p, z_r) üreten gömücü arayüzü."""
    out_dim: int

    def forward(self, pitch: torch.Tensor, rhythm: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
        raise NotImplementedError


class BaselineMelodyEmbedder(MelodyEmbedder):
    def __init__(self, hidden: int = 256, out_dim: int = 256) -> None:
        super().__init__()
        self.out_dim = out_dim
        self.pitch_gru = nn.GRU(MELODY_VOCAB, hidden, batch_first=True, bidirectional=True)
        self.rhythm_gru = nn.GRU(RHYTHM_FEATURES, hidden, batch_first=True, bidirectional=True)
        self.pitch_head = nn.Linear(2 * hidden, out_dim)
        self.rhythm_head = nn.Linear(2 * hidden, out_dim)

    def forward(self, pitch: torch.Tensor, rhythm: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
        _, h_p = self.pitch_gru(pitch)
        _, h_r = self.rhythm_gru(rhythm)
        z_p = self.pitch_head(torch.cat([h_p[0], h_p[1]], dim=-1))
        z_r = self.rhythm_head(torch.cat([h_r[0], h_r[1]], dim=-1))
        return z_p, z_r


def embed_melody(units: Sequence[Segment], embedder: MelodyEmbedder) -> List[MelodyUnitEmbedding]:
    if not units:
        return []
    pitch, rhythm = melody_inputs(units)
    param = next(embedder.parameters())
    with torch.no_grad():
        z_p, z_r = embedder(pitch.to(param.device, param.dtype), rhythm.to(param.device, param.dtype))
    return [MelodyUnitEmbedding(z_p[i], z_r[i]) for i in range(len(units))]
