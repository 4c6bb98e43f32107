# -*- coding: utf-8 -*-
"""
Melodi / eşlik eşli korpus
==========================

Manifest CSV sütunları: song_id, path, melody_track, accompaniment_tracks
(`accompaniment_tracks` ';' ile ayrılmış iz adlarıdır; `path` manifest
dizinine göreli olabilir).

Her parça 8 vuruşluk birimlere bölünür ve `units_per_sample` birimlik
örtüşmesiz pencerelere ayrılır.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Callable, List

import pandas as pd

from chordtex.control.generation import split_into_units
from chordtex.errors import DataError
from chordtex.score.midi_io import load_midi
from chordtex.score.types import Segment, Song

logger = logging.getLogger(__name__)

MANIFEST_COLUMNS = ("song_id", "path", "melody_track", "accompaniment_tracks")


@dataclass
class PairedSample:
    song_id: str
    melody: List[Segment]
    accompaniment: List[Segment]


@dataclass
class PairedCorpus:
    samples: List[PairedSample] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)

    @property
    def skip_count(self) -> int:
        return len(self.skipped)


def read_manifest(path: str) -> pd.DataFrame:
    try:
        df = pd.read_csv(path, dtype=str).fillna("")
    except Exception as e:
        raise DataError(f"Cannot read manifest {path}: {e}") from e
    missing = [c for c in MANIFEST_COLUMNS if c not in df.columns]
    if missing:
        raise DataError(f"Manifest {path} lacks columns: {missing}")
    base = os.path.dirname(os.path.abspath(path))
    df["path"] = [p if os.path.isabs(p) else os.path.join(base, p) for p in df["path"]]
    return df


def paired_windows(song: Song, melody_track: str, accompaniment_tracks: List[str],
                   units_per_sample: int = 4, offset_beats: int = 0) -> List[PairedSample]:
    melody = split_into_units(song, offset_beats, [melody_track])
    accompaniment = split_into_units(song, offset_beats, accompaniment_tracks)
    count = min(len(melody), len(accompaniment))
    return [
        PairedSample(song.song_id, melody[i:i + units_per_sample], accompaniment[i:i + units_per_sample])
        for i in range(0, count - units_per_sample + 1, units_per_sample)
    ]


def build_paired_samples(manifest_path: str, units_per_sample: int = 4, offset_beats: int = 0,
                         loader: Callable[[str, str], Song] = load_midi) -> PairedCorpus:
    """Manifestteki her parçadan eşli pencereler; eşi eksik parçalar atlanıp sayılır."""
    corpus = PairedCorpus()
    for row in read_manifest(manifest_path).itertuples(index=False):
        tracks = [t.strip() for t in row.accompaniment_tracks.split(";") if t.strip()]
        try:
            song = loader(row.path, row.song_id)
        except DataError as e:
            logger.warning(f"Skipping {row.song_id}: {e}")
            corpus.skipped.append(row.song_id)
            continue
        absent = [t for t in [row.melody_track, *tracks] if t not in song.tracks]
        if not row.melody_track or not tracks or absent:
            logger.warning(f"Skipping {row.song_id}: missing melody/accompaniment pairing {absent}")
            corpus.skipped.append(row.song_id)
            continue
        corpus.samples.extend(paired_windows(song, row.melody_track, tracks, units_per_sample, offset_beats))
    logger.info(f"Built {len(corpus.samples)} paired samples ({corpus.skip_count} songs skipped)")
    return corpus
