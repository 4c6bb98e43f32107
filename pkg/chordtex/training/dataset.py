# -*- coding: utf-8 -*-
"""Anahtar listesinden anında kaydırma + akor çıkarımı yapan Dataset."""

from typing import Dict, List, Mapping, Sequence

from torch.utils.data import Dataset

from chordtex.chords.extract import ExtractionMode
from chordtex.model.batch import build_example
from chordtex.score.augment import transpose
from chordtex.score.types import Segment
from chordtex.training.corpus import SegmentKey


class SegmentDataset(Dataset):
    def __init__(self, segments_by_song: Mapping[str, Sequence[Segment]], keys: Sequence[SegmentKey],
                 chord_mode: str = ExtractionMode.SOUNDING, max_notes: int = 16) -> None:
        self.segments_by_song = segments_by_song
        self.keys: List[SegmentKey] = list(keys)
        self.chord_mode = ExtractionMode(chord_mode)
        self.max_notes = max_notes

    def __len__(self) -> int:
        return len(self.keys)

    def segment(self, index: int) -> Segment:
        song, seg_index, shift = self.keys[index]
        return transpose(self.segments_by_song[song][seg_index], shift)

    def __getitem__(self, index: int) -> Dict[str, object]:
        example = build_example(self.segment(index), self.chord_mode, self.max_notes)
        shift = self.keys[index][2]
        if shift:
            example["id"] = f"{example['id']}+{shift}"
        return example
