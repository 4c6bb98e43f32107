# -*- coding: utf-8 -*-
"""
Korpus hazırlama
================

1. MIDI dizini okunur, parçalar segmentlenir, joblib kayıtlarına yazılır.
2. Parça düzeyinde train/test ayrımı yapılır (segment düzeyinde asla).
3. Eğitim segmentleri 0..11 yarım ton kaydırmalarla 12 kopya olarak anahtarlanır;
   test seti augmente edilmez.

Ayrım `index.json` içinde saklanır.
"""

import glob
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sklearn.model_selection import train_test_split

from chordtex.errors import DataError, EmptyCorpusError
from chordtex.score.corpus_store import save_corpus
from chordtex.score.midi_io import load_midi
from chordtex.score.segmentation import SegmentationResult, segment_songs
from chordtex.score.types import SEGMENT_BEATS, Segment
from chordtex.training.config import TrainConfig

logger = logging.getLogger(__name__)

INDEX_FILE = "index.json"
TRANSPOSITIONS = tuple(range(12))

SegmentKey = Tuple[str, int, int]   # (song_id, segment index, kaydırma)


@dataclass
class CorpusIndex:
    train_songs: List[str]
    test_songs: List[str]
    segment_counts: Dict[str, int]
    seed: int = 0
    split_fraction: float = 0.9
    hop_beats: int = SEGMENT_BEATS
    shifts: List[int] = field(default_factory=lambda: list(TRANSPOSITIONS))

    def train_keys(self) -> List[SegmentKey]:
        return [(song, i, shift)
                for song in self.train_songs
                for i in range(self.segment_counts[song])
                for shift in self.shifts]

    def test_keys(self) -> List[SegmentKey]:
        return [(song, i, 0) for song in self.test_songs for i in range(self.segment_counts[song])]

    def save(self, directory: str) -> str:
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, INDEX_FILE)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(asdict(self), f, indent=2, sort_keys=True)
        return path

    @classmethod
    def load(cls, directory: str) -> "CorpusIndex":
        path = os.path.join(directory, INDEX_FILE)
        if not os.path.exists(path):
            raise DataError(f"Corpus index not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            return cls(**json.load(f))


def split_songs(song_ids: Sequence[str], fraction: float, seed: int) -> Tuple[List[str], List[str]]:
    """Sıralı parça listesini tohumlu olarak ayırır; aynı tohum -> aynı ayrım."""
    ids = sorted(song_ids)
    if len(ids) < 2:
        raise EmptyCorpusError(f"Need at least two songs for a song-level split, got {len(ids)}")
    train, test = train_test_split(ids, train_size=fraction, random_state=seed, shuffle=True)
    return sorted(train), sorted(test)


def build_corpus(segments_by_song: Mapping[str, Sequence[Segment]], config: TrainConfig) -> CorpusIndex:
    counts = {song: len(segs) for song, segs in segments_by_song.items() if segs}
    if not counts:
        logger.error("Corpus has no segments")
        raise EmptyCorpusError("Corpus has no segments")
    train, test = split_songs(list(counts), config.split_fraction, config.seed)
    index = CorpusIndex(train, test, counts, config.seed, config.split_fraction, config.hop_beats)
    logger.info(f"Corpus split: {len(train)} train songs ({len(index.train_keys())} augmented segments), "
                f"{len(test)} test songs ({len(index.test_keys())} segments)")
    return index


def find_midi_files(directory: str) -> List[str]:
    patterns = ("*.mid", "*.midi", "*.MID", "*.MIDI")
    files = {p for pattern in patterns for p in glob.glob(os.path.join(directory, "**", pattern), recursive=True)}
    return sorted(files)


def preprocess_directory(input_dir: str, output_dir: str, hop_beats: int = SEGMENT_BEATS, start_beat: int = 0,
                         tracks: Optional[Sequence[str]] = None) -> SegmentationResult:
    """MIDI dizini -> joblib korpus kayıtları. Okunamayan dosyalar atlanır ve sayılır."""
    files = find_midi_files(input_dir)
    if not files:
        raise EmptyCorpusError(f"No MIDI files under {input_dir}")

    songs = []
    failed: List[str] = []
    for path in files:
        try:
            songs.append(load_midi(path))
        except DataError as e:
            logger.warning(f"Skipping {path}: {e}")
            failed.append(path)

    result = segment_songs(songs, hop_beats, start_beat, tracks)
    result.skipped_songs.extend(os.path.basename(p) for p in failed)
    kept = {k: v for k, v in result.segments_by_song.items() if v}
    if not kept:
        raise EmptyCorpusError(f"No usable 2/4 or 4/4 songs under {input_dir}")
    meters = {s.song_id: s.meter for s in songs if s.song_id in kept}
    save_corpus(output_dir, kept, meters)
    result.segments_by_song = kept
    return result
