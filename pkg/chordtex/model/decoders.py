# -*- coding: utf-8 -*-
"""
Çözücüler
=========

ChordDecoder: z_chd her adımda girdi olarak verilen, otoregresif olmayan çift
yönlü GRU; vuruş başına kök / bas (12 sınıf) ve chroma (12 bağımsız Bernoulli)
logit'leri üretir.

PianoTreeDecoder: hiyerarşik çözücü.
1. Kare GRU'su 32 kare gizli durumu üretir; her karenin girdisi
   [z, önceki karenin özet vektörü].
2. Nota GRU'su her karede artan perde sırasıyla notaları üretir
   (130 sınıf: 128 perde + SOS + EOS), en fazla `max_notes` nota.
3. Süre GRU'su her nota için 5 ardışık ikili karar verir.
"""

from dataclasses import dataclass
from typing import List

import torch
from torch import nn
from torch.nn.utils.rnn import pack_padded_sequence

from chordtex.model.config import ModelConfig
from chordtex.model.pianotree import (
    DURATION_BITS,
    IGNORE_INDEX,
    PITCH_EOS,
    PITCH_SOS,
    PITCH_VOCAB,
    PianoTree,
    bits_to_duration,
)
from chordtex.score.types import PITCH_COUNT, SEGMENT_BEATS, SEGMENT_STEPS


@dataclass
class ChordDecoderOutput:
    root: torch.Tensor    # (B, 8, 12)
    bass: torch.Tensor    # (B, 8, 12)
    chroma: torch.Tensor  # (B, 8, 12)


@dataclass
class PianoTreeOutput:
    pitch_logits: torch.Tensor     # (B, 32, W, 130)
    duration_logits: torch.Tensor  # (B, 32, W, 5)


class ChordDecoder(nn.Module):
    def __init__(self, z_dim: int = 256, hidden: int = 512) -> None:
        super().__init__()
        self.hidden = hidden
        self.init = nn.Linear(z_dim, 2 * hidden)
        self.gru = nn.GRU(z_dim, hidden, batch_first=True, bidirectional=True)
        self.root_head = nn.Linear(2 * hidden, 12)
        self.bass_head = nn.Linear(2 * hidden, 12)
        self.chroma_head = nn.Linear(2 * hidden, 12)

    def forward(self, z_chd: torch.Tensor) -> ChordDecoderOutput:
        b = z_chd.shape[0]
        steps = z_chd.unsqueeze(1).expand(b, SEGMENT_BEATS, z_chd.shape[-1])
        h0 = torch.tanh(self.init(z_chd)).reshape(b, 2, self.hidden).transpose(0, 1).contiguous()
        out, _ = self.gru(steps, h0)
        return ChordDecoderOutput(self.root_head(out), self.bass_head(out), self.chroma_head(out))


class PianoTreeDecoder(nn.Module):
    def __init__(self, cfg: ModelConfig) -> None:
        super().__init__()
        self.max_notes = cfg.max_notes
        self.summary_hidden = cfg.summary_hidden
        self.pitch_embedding = nn.Embedding(PITCH_VOCAB, cfg.pitch_embed)
        self.duration_proj = nn.Linear(DURATION_BITS, cfg.duration_embed)
        self.summary_gru = nn.GRU(cfg.note_embed, cfg.summary_hidden, batch_first=True)
        self.frame_init = nn.Linear(cfg.z_dim, cfg.frame_hidden)
        self.frame_gru = nn.GRU(cfg.z_dim + cfg.summary_hidden, cfg.frame_hidden, batch_first=True)
        self.note_init = nn.Linear(cfg.frame_hidden, cfg.note_hidden)
        self.note_gru = nn.GRU(cfg.note_embed, cfg.note_hidden, batch_first=True)
        self.pitch_head = nn.Linear(cfg.note_hidden, PITCH_VOCAB)
        self.duration_init = nn.Linear(cfg.note_hidden + cfg.pitch_embed, cfg.duration_hidden)
        # girdi: [önceki bit, başlangıç bayrağı]
        self.duration_gru = nn.GRU(2, cfg.duration_hidden, batch_first=True)
        self.duration_head = nn.Linear(cfg.duration_hidden, 1)

    @property
    def width(self) -> int:
        return self.max_notes + 1

    def embed_notes(self, tokens: torch.Tensor, bits: torch.Tensor) -> torch.Tensor:
        return torch.cat([self.pitch_embedding(tokens), self.duration_proj(bits)], dim=-1)

    def summarize(self, pitch: torch.Tensor, bits: torch.Tensor) -> torch.Tensor:
        """(N, W) pitch satırları (EOS dahil, kalan IGNORE) -> (N, summary_hidden)."""
        lengths = (pitch != IGNORE_INDEX).sum(-1).clamp(min=1)
        tokens = torch.where(pitch == IGNORE_INDEX, torch.full_like(pitch, PITCH_EOS), pitch)
        emb = self.embed_notes(tokens, bits)
        packed = pack_padded_sequence(emb, lengths.cpu(), batch_first=True, enforce_sorted=False)
        _, h_n = self.summary_gru(packed)
        return h_n[-1]

    def _duration_start(self, n: int, like: torch.Tensor) -> torch.Tensor:
        start = torch.zeros(n, 1, 2, dtype=like.dtype, device=like.device)
        start[..., 1] = 1.0
        return start

    def forward(self, z: torch.Tensor, pitch: torch.Tensor, bits: torch.Tensor) -> PianoTreeOutput:
        """Öğretmen zorlamalı (teacher-forced) çözüm."""
        b, t, w = pitch.shape
        z = z.to(bits.dtype)
        summaries = self.summarize(pitch.reshape(b * t, w), bits.reshape(b * t, w, DURATION_BITS))
        summaries = summaries.reshape(b, t, -1)
        previous = torch.cat([summaries.new_zeros(b, 1, summaries.shape[-1]), summaries[:, :-1]], dim=1)
        frame_in = torch.cat([z.unsqueeze(1).expand(b, t, z.shape[-1]), previous], dim=-1)
        frame_h0 = torch.tanh(self.frame_init(z)).unsqueeze(0)
        frame_out, _ = self.frame_gru(frame_in, frame_h0)

        tokens = torch.where(pitch == IGNORE_INDEX, torch.full_like(pitch, PITCH_EOS), pitch)
        in_tokens = torch.cat([torch.full_like(tokens[..., :1], PITCH_SOS), tokens[..., :-1]], dim=-1)
        in_bits = torch.cat([torch.zeros_like(bits[..., :1, :]), bits[..., :-1, :]], dim=-2)
        note_in = self.embed_notes(in_tokens, in_bits).reshape(b * t, w, -1)
        note_h0 = torch.tanh(self.note_init(frame_out)).reshape(1, b * t, -1)
        note_out, _ = self.note_gru(note_in, note_h0)
        pitch_logits = self.pitch_head(note_out).reshape(b, t, w, PITCH_VOCAB)

        n = b * t * w
        dur_h0 = torch.tanh(self.duration_init(
            torch.cat([note_out, self.pitch_embedding(tokens.reshape(b * t, w))], dim=-1)
        )).reshape(1, n, -1)
        flat_bits = bits.reshape(n, DURATION_BITS)
        shifted = torch.stack([flat_bits[:, :-1], torch.zeros_like(flat_bits[:, :-1])], dim=-1)
        dur_in = torch.cat([self._duration_start(n, flat_bits), shifted], dim=1)
        dur_out, _ = self.duration_gru(dur_in, dur_h0)
        duration_logits = self.duration_head(dur_out).squeeze(-1).reshape(b, t, w, DURATION_BITS)
        return PianoTreeOutput(pitch_logits, duration_logits)

    @torch.no_grad()
    def greedy(self, z: torch.Tensor) -> List[PianoTree]:
        """Açgözlü çözüm; perdeler kare içinde kesin artan, kare başına <= max_notes."""
        b = z.shape[0]
        device, dtype = z.device, z.dtype
        w = self.width
        frame_h = torch.tanh(self.frame_init(z)).unsqueeze(0)
        summary = z.new_zeros(b, self.summary_hidden)
        pitch_range = torch.arange(PITCH_COUNT, device=device)
        frames: List[List[tuple]] = [[] for _ in range(b)]

        for _t in range(SEGMENT_STEPS):
            out, frame_h = self.frame_gru(torch.cat([z, summary], dim=-1).unsqueeze(1), frame_h)
            note_h = torch.tanh(self.note_init(out[:, 0])).unsqueeze(0)
            prev_tok = torch.full((b,), PITCH_SOS, dtype=torch.long, device=device)
            prev_bits = z.new_zeros(b, DURATION_BITS)
            last = torch.full((b,), -1, dtype=torch.long, device=device)
            done = torch.zeros(b, dtype=torch.bool, device=device)
            pitch_rows = torch.full((b, w), IGNORE_INDEX, dtype=torch.long, device=device)
            bit_rows = z.new_zeros(b, w, DURATION_BITS)
            frame_notes: List[List[tuple]] = [[] for _ in range(b)]

            for k in range(w):
                o, note_h = self.note_gru(self.embed_notes(prev_tok, prev_bits).unsqueeze(1), note_h)
                o = o[:, 0]
                mask = torch.zeros(b, PITCH_VOCAB, dtype=torch.bool, device=device)
                mask[:, PITCH_SOS] = True
                if k == self.max_notes:
                    mask[:, :PITCH_COUNT] = True
                else:
                    mask[:, :PITCH_COUNT] = pitch_range.unsqueeze(0) <= last.unsqueeze(1)
                tok = self.pitch_head(o).masked_fill(mask, float("-inf")).argmax(-1)
                tok = torch.where(done, torch.full_like(tok, PITCH_EOS), tok)

                dur_h = torch.tanh(self.duration_init(torch.cat([o, self.pitch_embedding(tok)], dim=-1))).unsqueeze(0)
                bit_in = self._duration_start(b, z)
                decided = []
                for _ in range(DURATION_BITS):
                    d_out, dur_h = self.duration_gru(bit_in, dur_h)
                    bit = (self.duration_head(d_out[:, 0]).squeeze(-1) > 0).to(dtype)
                    decided.append(bit)
                    bit_in = torch.stack([bit, torch.zeros_like(bit)], dim=-1).unsqueeze(1)
                bits = torch.stack(decided, dim=-1)

                is_note = (~done) & (tok < PITCH_COUNT)
                pitch_rows[:, k] = torch.where(done, torch.full_like(tok, IGNORE_INDEX), tok)
                bits = bits * is_note.unsqueeze(-1).to(dtype)
                bit_rows[:, k] = bits
                for i in torch.nonzero(is_note).flatten().tolist():
                    frame_notes[i].append((int(tok[i]), bits_to_duration(bits[i].tolist())))
                last = torch.where(is_note, tok, last)
                done = done | (tok == PITCH_EOS)
                prev_tok, prev_bits = tok, bits
                if bool(done.all()):
                    break

            for i in range(b):
                frames[i].append(tuple(frame_notes[i]))
            summary = self.summarize(pitch_rows, bit_rows)

        return [PianoTree(tuple(f)) for f in frames]
