# -*- coding: utf-8 -*-
"""
Kodlayıcılar
============

- ChordEncoder: 36x8 akor matrisi -> çift yönlü GRU -> iki uçtaki son gizli
  durumların birleşimi -> (ortalama, log-varyans)
- TextureEncoder: 128x32 süre matrisi -> Conv(1->10, 12x4, adım 1x4, dolgu yok)
  -> ReLU -> MaxPool(4x1) -> 8 zaman adımı x 290 özellik -> çift yönlü GRU
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import torch
from torch import nn

from chordtex.chords.extract import CHORD_DIM
from chordtex.errors import MalformedChordMatrixError, MalformedPianoRollError
from chordtex.score.types import PITCH_COUNT, SEGMENT_STEPS

CONV_KERNEL = (12, 4)
CONV_STRIDE = (1, 4)
POOL_KERNEL = (4, 1)
CONV_HEIGHT = PITCH_COUNT - CONV_KERNEL[0] + 1          # 117
CONV_WIDTH = SEGMENT_STEPS // CONV_STRIDE[1]            # 8
POOLED_HEIGHT = CONV_HEIGHT // POOL_KERNEL[0]           # 29


@dataclass
class GaussianLatent:
    """İzotropik Gauss sonsal: (ortalama, log-varyans)."""
    mean: torch.Tensor
    log_variance: torch.Tensor

    @property
    def dim(self) -> int:
        return self.mean.shape[-1]

    def detach(self) -> "GaussianLatent":
        return GaussianLatent(self.mean.detach(), self.log_variance.detach())

    def __getitem__(self, index) -> "GaussianLatent":
        return GaussianLatent(self.mean[index], self.log_variance[index])


def reparameterize(lat: GaussianLatent, generator: Optional[torch.Generator] = None) -> torch.Tensor:
    """mean + exp(0.5 * logvar) * eps, eps ~ N(0, I)."""
    eps = torch.randn(lat.mean.shape, generator=generator, dtype=lat.mean.dtype)
    return lat.mean + torch.exp(0.5 * lat.log_variance) * eps.to(lat.mean.device)


def _last_states(h_n: torch.Tensor) -> torch.Tensor:
    # h_n: (2, B, H) -> (B, 2H); ileri ve geri yönün son durumları
    return torch.cat([h_n[0], h_n[1]], dim=-1)


class ChordEncoder(nn.Module):
    def __init__(self, hidden: int = 256, z_dim: int = 256) -> None:
        super().__init__()
        self.gru = nn.GRU(CHORD_DIM, hidden, batch_first=True, bidirectional=True)
        self.mean_head = nn.Linear(2 * hidden, z_dim)
        self.logvar_head = nn.Linear(2 * hidden, z_dim)

    def forward(self, chord: torch.Tensor) -> GaussianLatent:
        if chord.dim() != 3 or chord.shape[1:] != (CHORD_DIM, 8):
            raise MalformedChordMatrixError(f"chord input must be (B, 36, 8), got {tuple(chord.shape)}")
        _, h_n = self.gru(chord.transpose(1, 2))
        h = _last_states(h_n)
        return GaussianLatent(self.mean_head(h), self.logvar_head(h))


class TextureEncoder(nn.Module):
    def __init__(self, hidden: int = 512, z_dim: int = 256, channels: int = 10) -> None:
        super().__init__()
        self.conv = nn.Conv2d(1, channels, kernel_size=CONV_KERNEL, stride=CONV_STRIDE)
        self.pool = nn.MaxPool2d(kernel_size=POOL_KERNEL, stride=POOL_KERNEL)
        self.gru = nn.GRU(channels * POOLED_HEIGHT, hidden, batch_first=True, bidirectional=True)
        self.mean_head = nn.Linear(2 * hidden, z_dim)
        self.logvar_head = nn.Linear(2 * hidden, z_dim)

    def conv_features(self, roll: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
        """(havuz öncesi ReLU çıktısı (B,10,117,8), havuzlanmış (B,10,29,8))."""
        if roll.dim() != 3 or roll.shape[1:] != (PITCH_COUNT, SEGMENT_STEPS):
            raise MalformedPianoRollError(f"piano-roll input must be (B, 128, 32), got {tuple(roll.shape)}")
        pre = torch.relu(self.conv(roll.unsqueeze(1)))
        return pre, self.pool(pre)

    def forward(self, roll: torch.Tensor) -> GaussianLatent:
        _, pooled = self.conv_features(roll)
        b, c, h, w = pooled.shape
        # zaman adımı başına (kanal x yükseklik) özellik vektörü
        steps = pooled.permute(0, 3, 1, 2).reshape(b, w, c * h)
        _, h_n = self.gru(steps)
        h = _last_states(h_n)
        return GaussianLatent(self.mean_head(h), self.logvar_head(h))
