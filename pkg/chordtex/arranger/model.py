# -*- coding: utf-8 -*-
"""
Gizil dizi Transformer'ı
========================

Kodlayıcı girdisi:  [z_p(1..U), z_r(1..U)]
Çözücü hedefi:      [z_chd(1..U), z_txt(1..U)]  (önce tüm akorlar, sonra tüm dokular)

Her token'a birim konumu için sinüzoidal konum kodlaması ve faktör türü için
öğrenilen gömme eklenir. Çözücü girdisi hedefin bir sağa kaydırılmış halidir;
0. konuma öğrenilen başlangıç vektörü konur ve j. girdi j. yuvanın
etiketlerini taşır.
"""

import math
from typing import Optional, Tuple

import torch
from torch import nn

from chordtex.arranger.config import ArrangerConfig
from chordtex.arranger.melody import BaselineMelodyEmbedder, MelodyEmbedder

PITCH_FACTOR = 0
RHYTHM_FACTOR = 1
CHORD_FACTOR = 2
TEXTURE_FACTOR = 3
FACTOR_COUNT = 4


class SinusoidalPositions(nn.Module):
    def __init__(self, dim: int, max_len: int) -> None:
        super().__init__()
        position = torch.arange(max_len, dtype=torch.float).unsqueeze(1)
        div_term = torch.exp(torch.arange(0, dim, 2).float() * (-math.log(10000.0) / dim))
        pe = torch.zeros(max_len, dim)
        pe[:, 0::2] = torch.sin(position * div_term)
        pe[:, 1::2] = torch.cos(position * div_term)
        self.register_buffer("pe", pe)

    def forward(self, positions: torch.Tensor) -> torch.Tensor:
        return self.pe[positions]


def factor_layout(units: int, first: int, second: int) -> Tuple[torch.Tensor, torch.Tensor]:
    """(faktör kimlikleri, konumlar), her biri (2U,)."""
    factors = torch.tensor([first] * units + [second] * units, dtype=torch.long)
    positions = torch.arange(units, dtype=torch.long).repeat(2)
    return factors, positions


class LatentArranger(nn.Module):
    def __init__(self, config: ArrangerConfig, melody_dim: int, z_chd_dim: int, z_txt_dim: int) -> None:
        super().__init__()
        d = config.hidden
        self.config = config
        self.z_chd_dim = z_chd_dim
        self.z_txt_dim = z_txt_dim
        self.pitch_in = nn.Linear(melody_dim, d)
        self.rhythm_in = nn.Linear(melody_dim, d)
        self.chord_in = nn.Linear(z_chd_dim, d)
        self.texture_in = nn.Linear(z_txt_dim, d)
        self.chord_out = nn.Linear(d, z_chd_dim)
        self.texture_out = nn.Linear(d, z_txt_dim)
        self.factor_embedding = nn.Embedding(FACTOR_COUNT, d)
        self.positions = SinusoidalPositions(d, config.max_positions)
        self.start = nn.Parameter(torch.randn(d) * 0.02)
        self.transformer = nn.Transformer(
            d_model=d, nhead=config.heads, num_encoder_layers=config.layers,
            num_decoder_layers=config.layers, dim_feedforward=config.feedforward,
            dropout=config.dropout, batch_first=True,
        )

    def _tags(self, units: int, first: int, second: int, device,
              factor_ids: Optional[torch.Tensor] = None) -> torch.Tensor:
        factors, positions = factor_layout(units, first, second)
        if factor_ids is not None:
            factors = factor_ids
        return self.factor_embedding(factors.to(device)) + self.positions(positions.to(device))

    def encode_source(self, z_p: torch.Tensor, z_r: torch.Tensor) -> torch.Tensor:
        units = z_p.shape[1]
        tokens = torch.cat([self.pitch_in(z_p), self.rhythm_in(z_r)], dim=1)
        return tokens + self._tags(units, PITCH_FACTOR, RHYTHM_FACTOR, tokens.device)

    def target_tokens(self, z_chd: torch.Tensor, z_txt: torch.Tensor) -> torch.Tensor:
        return torch.cat([self.chord_in(z_chd), self.texture_in(z_txt)], dim=1)

    def shift_right(self, tokens: torch.Tensor) -> torch.Tensor:
        start = self.start.expand(tokens.shape[0], 1, -1)
        return torch.cat([start, tokens[:, :-1]], dim=1)

    def _decode(self, z_p: torch.Tensor, z_r: torch.Tensor, z_chd: torch.Tensor, z_txt: torch.Tensor,
                factor_ids: Optional[torch.Tensor] = None) -> torch.Tensor:
        units = z_p.shape[1]
        memory_in = self.encode_source(z_p, z_r)
        dec_in = self.shift_right(self.target_tokens(z_chd, z_txt))
        dec_in = dec_in + self._tags(units, CHORD_FACTOR, TEXTURE_FACTOR, dec_in.device, factor_ids)
        mask = self.transformer.generate_square_subsequent_mask(2 * units).to(device=dec_in.device,
                                                                             dtype=dec_in.dtype)
        return self.transformer(memory_in, dec_in, tgt_mask=mask)

    def forward(self, z_p: torch.Tensor, z_r: torch.Tensor, z_chd: torch.Tensor, z_txt: torch.Tensor,
                factor_ids: Optional[torch.Tensor] = None) -> Tuple[torch.Tensor, torch.Tensor]:
        """Öğretmen zorlamalı tahmin: (B, U, z_chd_dim), (B, U, z_txt_dim)."""
        units = z_p.shape[1]
        out = self._decode(z_p, z_r, z_chd, z_txt, factor_ids)
        return self.chord_out(out[:, :units]), self.texture_out(out[:, units:])

    @torch.no_grad()
    def generate(self, z_p: torch.Tensor, z_r: torch.Tensor,
                 forced_chd: Optional[torch.Tensor] = None, chd_mask: Optional[torch.Tensor] = None,
                 forced_txt: Optional[torch.Tensor] = None, txt_mask: Optional[torch.Tensor] = None,
                 ) -> Tuple[torch.Tensor, torch.Tensor]:
        """
        Otoregresif çözüm. `*_mask` (U,) bool; True olan yuvalar tahmin yerine
        `forced_*` değerini alır ve sonraki adımlara o değer beslenir.
        """
        b, units = z_p.shape[:2]
        z_chd = z_p.new_zeros(b, units, self.z_chd_dim)
        z_txt = z_p.new_zeros(b, units, self.z_txt_dim)
        for j in range(2 * units):
            is_chord = j < units
            k = j if is_chord else j - units
            forced, mask = (forced_chd, chd_mask) if is_chord else (forced_txt, txt_mask)
            if mask is not None and bool(mask[k]):
                value = forced[:, k]
            else:
                out = self._decode(z_p, z_r, z_chd, z_txt)[:, j]
                value = self.chord_out(out) if is_chord else self.texture_out(out)
            if is_chord:
                z_chd[:, k] = value
            else:
                z_txt[:, k] = value
        return z_chd, z_txt


class ArrangerModel(nn.Module):
    """Melodi gömücü + gizil Transformer; checkpoint birimi."""

    def __init__(self, config: ArrangerConfig, z_chd_dim: int, z_txt_dim: int,
                 embedder: Optional[MelodyEmbedder] = None) -> None:
        super().__init__()
        self.config = config
        self.embedder = embedder or BaselineMelodyEmbedder(config.melody_hidden, config.melody_dim)
        self.arranger = LatentArranger(config, self.embedder.out_dim, z_chd_dim, z_txt_dim)

    def embed(self, pitch: torch.Tensor, rhythm: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
        """(B, U, 32, 130), (B, U, 32, 4) -> (B, U, D) ikilisi."""
        b, units = pitch.shape[:2]
        z_p, z_r = self.embedder(pitch.flatten(0, 1), rhythm.flatten(0, 1))
        return z_p.reshape(b, units, -1), z_r.reshape(b, units, -1)

    def forward(self, pitch: torch.Tensor, rhythm: torch.Tensor, z_chd: torch.Tensor,
                z_txt: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
        z_p, z_r = self.embed(pitch, rhythm)
        return self.arranger(z_p, z_r, z_chd, z_txt)
