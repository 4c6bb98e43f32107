# -*- coding: utf-8 -*-
"""Segment listesinden model girdisi ve hedef tensörlerini kurar."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import torch

from chordtex.chords.extract import ChordProgression, ExtractionMode, encode_matrix, extract_progression
from chordtex.model.pianotree import pianotree_targets
from chordtex.score.types import Segment, to_matrix


@dataclass
class VAEBatch:
    chord: torch.Tensor   # (B, 36, 8) float
    roll: torch.Tensor    # (B, 128, 32) float, süre değerli
    pitch: torch.Tensor   # (B, 32, W) long
    bits: torch.Tensor    # (B, 32, W, 5) float
    ids: List[str] = field(default_factory=list)

    def __len__(self) -> int:
        return self.chord.shape[0]

    def to(self, device, dtype: Optional[torch.dtype] = None) -> "VAEBatch":
        dtype = dtype or self.chord.dtype
        return VAEBatch(
            self.chord.to(device=device, dtype=dtype),
            self.roll.to(device=device, dtype=dtype),
            self.pitch.to(device),
            self.bits.to(device=device, dtype=dtype),
            list(self.ids),
        )


def build_example(seg: Segment, mode: str = ExtractionMode.SOUNDING, max_notes: int = 16,
                  progression: Optional[ChordProgression] = None) -> Dict[str, object]:
    """Tek segment için tensör sözlüğü (DataLoader örneği)."""
    prog = progression if progression is not None else extract_progression(seg, mode)
    pitch, bits = pianotree_targets(seg, max_notes)
    return {
        "chord": torch.from_numpy(encode_matrix(prog).astype(np.float32)),
        "roll": torch.from_numpy(to_matrix(seg).astype(np.float32)),
        "pitch": pitch,
        "bits": bits,
        "id": seg.segment_id,
    }


def collate_examples(examples: Sequence[Dict[str, object]]) -> VAEBatch:
    return VAEBatch(
        torch.stack([e["chord"] for e in examples]),
        torch.stack([e["roll"] for e in examples]),
        torch.stack([e["pitch"] for e in examples]),
        torch.stack([e["bits"] for e in examples]),
        [str(e["id"]) for e in examples],
    )


def make_batch(segments: Sequence[Segment], mode: str = ExtractionMode.SOUNDING, max_notes: int = 16,
               progressions: Optional[Sequence[ChordProgression]] = None) -> VAEBatch:
    if progressions is not None and len(progressions) != len(segments):
        raise ValueError("progressions must align with segments")
    examples = [
        build_example(seg, mode, max_notes, progressions[i] if progressions is not None else None)
        for i, seg in enumerate(segments)
    ]
    return collate_examples(examples)
