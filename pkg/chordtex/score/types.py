# -*- coding: utf-8 -*-
"""
Sembolik müzik ara temsili (IR)
===============================

- SongNote / Song: mutlak zamanda (çeyrek-nota vuruşu cinsinden) kuantalanmamış notalar
- NoteEvent / Segment: 1/4 vuruş ızgarasında, 8 vuruşluk (32 adım) segment
- PianoRoll süre matrisi: 128 x 32, onset hücresi notanın süresini tutar
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

import numpy as np

STEPS_PER_BEAT = 4
SEGMENT_BEATS = 8
SEGMENT_STEPS = SEGMENT_BEATS * STEPS_PER_BEAT  # 32
PITCH_COUNT = 128


@dataclass(frozen=True, order=True)
class NoteEvent:
    """Segment içi nota: onset ve süre 1/4 vuruş adımı cinsinden."""
    onset: int
    pitch: int
    duration: int

    def __post_init__(self) -> None:
        if self.onset < 0:
            raise ValueError(f"onset must be >= 0, got {self.onset}")
        if not 0 <= self.pitch < PITCH_COUNT:
            raise ValueError(f"pitch must be in [0, 127], got {self.pitch}")
        if self.duration < 1:
            raise ValueError(f"duration must be >= 1, got {self.duration}")


@dataclass(frozen=True)
class SongNote:
    start_beat: float
    end_beat: float
    pitch: int
    velocity: int = 80


@dataclass(frozen=True)
class MeterChange:
    bar: int
    numerator: int
    denominator: int
    beat: float = 0.0


@dataclass(frozen=True)
class TempoChange:
    beat: float
    qpm: float


@dataclass
class Song:
    """Parça: isimli izler, ölçü (meter) ve tempo haritası."""
    song_id: str
    tracks: Dict[str, List[SongNote]]
    meter: List[MeterChange] = field(default_factory=lambda: [MeterChange(0, 4, 4, 0.0)])
    tempo: List[TempoChange] = field(default_factory=lambda: [TempoChange(0.0, 120.0)])

    def __post_init__(self) -> None:
        if not self.meter:
            raise ValueError("meter list must not be empty")
        for name in self.tracks:
            self.tracks[name] = sorted(self.tracks[name], key=lambda n: (n.start_beat, n.pitch))

    @property
    def note_count(self) -> int:
        return sum(len(notes) for notes in self.tracks.values())


@dataclass(frozen=True)
class Segment:
    """
    8 vuruşluk müzik segmenti.

    Değişmezler: onset [0, 32) aralığında, onset + süre <= 32, notalar
    (onset, pitch) sıralı ve aynı (onset, pitch) çifti tekrar etmez.
    Doğrudan kurmak yerine `Segment.from_notes` normalizasyon yapar.
    """
    notes: Tuple[NoteEvent, ...] = ()
    song_id: str = ""
    start_beat: int = 0

    steps = SEGMENT_STEPS

    def __post_init__(self) -> None:
        previous = None
        for note in self.notes:
            if note.onset >= SEGMENT_STEPS:
                raise ValueError(f"onset {note.onset} outside segment")
            if note.onset + note.duration > SEGMENT_STEPS:
                raise ValueError(f"note {note} crosses the segment boundary")
            key = (note.onset, note.pitch)
            if previous is not None and key <= previous:
                raise ValueError("notes must be sorted by (onset, pitch) without duplicates")
            previous = key

    @classmethod
    def from_notes(cls, notes: Iterable[Tuple[int, int, int]], song_id: str = "",
                   start_beat: int = 0) -> "Segment":
        """(onset, pitch, duration) üçlülerinden normalleştirilmiş segment üretir.

        Aralık dışı onset/pitch atılır, segment sınırını aşan süreler kırpılır,
        aynı (onset, pitch) notalardan uzun olan tutulur.
        """
        merged: Dict[Tuple[int, int], int] = {}
        for onset, pitch, duration in notes:
            onset, pitch, duration = int(onset), int(pitch), int(duration)
            if not 0 <= onset < SEGMENT_STEPS or not 0 <= pitch < PITCH_COUNT:
                continue
            duration = min(max(duration, 1), SEGMENT_STEPS - onset)
            key = (onset, pitch)
            if merged.get(key, 0) < duration:
                merged[key] = duration
        events = tuple(NoteEvent(o, p, d) for (o, p), d in sorted(merged.items()))
        return cls(events, song_id, start_beat)

    @property
    def source(self) -> Tuple[str, int]:
        return self.song_id, self.start_beat

    @property
    def segment_id(self) -> str:
        return f"{self.song_id}@{self.start_beat}"

    def triples(self) -> List[Tuple[int, int, int]]:
        return [(n.onset, n.pitch, n.duration) for n in self.notes]

    def with_notes(self, notes: Iterable[Tuple[int, int, int]]) -> "Segment":
        return Segment.from_notes(notes, self.song_id, self.start_beat)

    def to_array(self) -> np.ndarray:
        if not self.notes:
            return np.zeros((0, 3), dtype=np.int16)
        return np.asarray(self.triples(), dtype=np.int16)


def to_matrix(seg: Segment) -> np.ndarray:
    """Segment -> 128x32 süre matrisi (onset hücresi süreyi tutar)."""
    mat = np.zeros((PITCH_COUNT, SEGMENT_STEPS), dtype=np.int64)
    for note in seg.notes:
        mat[note.pitch, note.onset] = note.duration
    return mat


def from_matrix(mat: np.ndarray, song_id: str = "", start_beat: int = 0) -> Segment:
    """`to_matrix` tersi."""
    mat = np.asarray(mat)
    if mat.shape != (PITCH_COUNT, SEGMENT_STEPS):
        raise ValueError(f"piano-roll matrix must be 128x32, got {mat.shape}")
    if (mat < 0).any():
        raise ValueError("piano-roll matrix entries must be nonnegative")
    pitches, onsets = np.nonzero(mat)
    limits = SEGMENT_STEPS - onsets
    if (mat[pitches, onsets] > limits).any():
        raise ValueError("matrix entry exceeds the remaining segment length")
    notes = [(int(t), int(p), int(mat[p, t])) for p, t in zip(pitches, onsets)]
    return Segment.from_notes(notes, song_id, start_beat)
