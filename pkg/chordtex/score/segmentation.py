# -*- coding: utf-8 -*-
"""
Kuantalama ve segmentleme
=========================

Notalar 1/4 vuruş ızgarasına en yakın komşu yuvarlamasıyla (eşitlikte yukarı)
oturtulur, ardından `hop_beats` aralıkla 8 vuruşluk pencereler kesilir.
Yalnızca 2/4 ve 4/4 ölçülü parçalar tutulur.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from chordtex.score.types import SEGMENT_BEATS, SEGMENT_STEPS, STEPS_PER_BEAT, Segment, Song

logger = logging.getLogger(__name__)

SUPPORTED_METERS = {(2, 4), (4, 4)}


@dataclass
class SegmentationResult:
    segments_by_song: Dict[str, List[Segment]] = field(default_factory=dict)
    skipped_songs: List[str] = field(default_factory=list)

    @property
    def skip_count(self) -> int:
        return len(self.skipped_songs)

    @property
    def segment_count(self) -> int:
        return sum(len(v) for v in self.segments_by_song.values())


def quantize_step(beat: float) -> int:
    """Vuruş -> en yakın 1/4 vuruş indeksi (0.5 eşitliği yukarı yuvarlanır)."""
    return int(math.floor(beat * STEPS_PER_BEAT + 0.5))


def has_supported_meter(song: Song) -> bool:
    return all((m.numerator, m.denominator) in SUPPORTED_METERS for m in song.meter)


def quantize_and_segment(song: Song, hop_beats: int = SEGMENT_BEATS, start_beat: int = 0,
                         tracks: Optional[Sequence[str]] = None) -> List[Segment]:
    """
    Song -> 8 vuruşluk Segment listesi.

    Args:
        hop_beats: pencere başlangıçları arası vuruş (>= 1)
        start_beat: ilk pencerenin başladığı vuruş (birim hizalama ofseti)
        tracks: birleştirilecek iz adları; None ise tüm izler
    """
    if hop_beats < 1:
        raise ValueError("hop_beats must be >= 1")
    if not has_supported_meter(song):
        meters = sorted({f"{m.numerator}/{m.denominator}" for m in song.meter})
        logger.info(f"Skipping {song.song_id}: unsupported meter {meters}")
        return []

    names = list(song.tracks) if tracks is None else [t for t in tracks if t in song.tracks]
    quantized = []
    for name in names:
        for note in song.tracks[name]:
            onset = quantize_step(note.start_beat)
            duration = quantize_step(note.end_beat - note.start_beat)
            if onset < 0:
                continue
            quantized.append((onset, note.pitch, max(duration, 1)))
    if not quantized:
        return []

    total_steps = max(o + d for o, _, d in quantized)
    total_beats = math.ceil(total_steps / STEPS_PER_BEAT)

    by_onset = sorted(quantized)
    segments: List[Segment] = []
    window = start_beat
    while window + SEGMENT_BEATS <= total_beats:
        lo = window * STEPS_PER_BEAT
        hi = lo + SEGMENT_STEPS
        notes = [(o - lo, p, d) for o, p, d in by_onset if lo <= o < hi]
        segments.append(Segment.from_notes(notes, song.song_id, window))
        window += hop_beats
    return segments


def segment_songs(songs: Iterable[Song], hop_beats: int = SEGMENT_BEATS, start_beat: int = 0,
                  tracks: Optional[Sequence[str]] = None) -> SegmentationResult:
    """Toplu segmentleme; desteklenmeyen ölçülü parçaları sayar."""
    result = SegmentationResult()
    for song in songs:
        if not has_supported_meter(song):
            result.skipped_songs.append(song.song_id)
            logger.info(f"Skipping {song.song_id}: meter is not 2/4 or 4/4")
            continue
        result.segments_by_song[song.song_id] = quantize_and_segment(song, hop_beats, start_beat, tracks)
    logger.info(f"Segmented {len(result.segments_by_song)} songs into {result.segment_count} segments "
                f"({result.skip_count} skipped)")
    return result
