# -*- coding: utf-8 -*-
"""
PianoTree veri biçimi
=====================

32 kare (her 1/4 vuruş), her karede artan perdeli nota listesi; her nota
(pitch, süre). Süre, (süre - 1) değerinin 5 ikili basamağıyla kodlanır
(en anlamlı bit önce), böylece 1..32 aralığı temsil edilir.

Tensör hedefleri:
- pitch: (32, max_notes + 1) long; notalar, ardından EOS, kalan IGNORE_INDEX
- dur_bits: (32, max_notes + 1, 5) float; yalnızca nota konumları dolu
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import torch

from chordtex.score.types import SEGMENT_STEPS, Segment

logger = logging.getLogger(__name__)

PITCH_VOCAB = 130
PITCH_SOS = 128
PITCH_EOS = 129
IGNORE_INDEX = -100
DURATION_BITS = 5
MAX_DURATION = 2 ** DURATION_BITS


def duration_to_bits(duration: int) -> List[int]:
    if not 1 <= duration <= MAX_DURATION:
        raise ValueError(f"duration must be in [1, {MAX_DURATION}], got {duration}")
    code = duration - 1
    return [(code >> (DURATION_BITS - 1 - k)) & 1 for k in range(DURATION_BITS)]


def bits_to_duration(bits: Sequence[int]) -> int:
    code = 0
    for bit in bits:
        code = (code << 1) | int(bit)
    return code + 1


@dataclass(frozen=True)
class PianoTree:
    """Çözülmüş hiyerarşik yapı: kare -> (pitch, süre) notaları."""
    frames: Tuple[Tuple[Tuple[int, int], ...], ...]

    def __post_init__(self) -> None:
        if len(self.frames) != SEGMENT_STEPS:
            raise ValueError(f"PianoTree needs {SEGMENT_STEPS} frames, got {len(self.frames)}")
        for frame in self.frames:
            pitches = [p for p, _ in frame]
            if any(b <= a for a, b in zip(pitches, pitches[1:])):
                raise ValueError("pitches within a frame must be strictly increasing")
            if any(not 1 <= d <= MAX_DURATION for _, d in frame):
                raise ValueError("durations must be in [1, 32]")

    def to_segment(self, song_id: str = "", start_beat: int = 0) -> Segment:
        notes = [(t, p, d) for t, frame in enumerate(self.frames) for p, d in frame]
        return Segment.from_notes(notes, song_id, start_beat)


def segment_to_pianotree(seg: Segment, max_notes: int = 16) -> PianoTree:
    frames: List[List[Tuple[int, int]]] = [[] for _ in range(SEGMENT_STEPS)]
    for note in seg.notes:
        frames[note.onset].append((note.pitch, note.duration))
    kept = []
    for t, frame in enumerate(frames):
        frame.sort()
        if len(frame) > max_notes:
            logger.warning(f"{seg.segment_id}: frame {t} has {len(frame)} notes, keeping the lowest {max_notes}")
            frame = frame[:max_notes]
        kept.append(tuple(frame))
    return PianoTree(tuple(kept))


def pianotree_targets(seg: Segment, max_notes: int = 16) -> Tuple[torch.Tensor, torch.Tensor]:
    """Segment -> (pitch hedefleri, süre bitleri) tensörleri."""
    tree = segment_to_pianotree(seg, max_notes)
    width = max_notes + 1
    pitch = torch.full((SEGMENT_STEPS, width), IGNORE_INDEX, dtype=torch.long)
    dur = torch.zeros((SEGMENT_STEPS, width, DURATION_BITS), dtype=torch.float32)
    for t, frame in enumerate(tree.frames):
        for k, (p, d) in enumerate(frame):
            pitch[t, k] = p
            dur[t, k] = torch.tensor(duration_to_bits(d), dtype=torch.float32)
        pitch[t, len(frame)] = PITCH_EOS
    return pitch, dur
