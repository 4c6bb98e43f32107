# -*- coding: utf-8 -*-
"""
Kural tabanlı akor tanıma
=========================

Her vuruş için perde sınıfı kümesi toplanır, sözlükteki her (kök, şablon)
çifti puanlanır ve en iyi kök seçilir. Saklanan chroma gözlenen kümedir,
eşleşen şablon değil. Bas, vuruştaki en pes notanın perde sınıfıdır.

Puan = |gözlenen ∩ şablon| - 0.5 |şablon \\ gözlenen| - 0.3 |gözlenen \\ şablon|
Eşitlikte: üçlüler dörtlülerden önce, sonra basın üstündeki en küçük kök
aralığı, sonra sözlük sırası.

36x8 matris: satır 0-11 kök one-hot, 12-23 bas one-hot, 24-35 chroma.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from chordtex.errors import MalformedChordMatrixError
from chordtex.score.types import SEGMENT_BEATS, STEPS_PER_BEAT, Segment

CHORD_DIM = 36

# sözlük sırası eşitlik bozmada son kriterdir
CHORD_TEMPLATES: Tuple[Tuple[str, Tuple[int, ...]], ...] = (
    ("maj", (0, 4, 7)),
    ("min", (0, 3, 7)),
    ("dim", (0, 3, 6)),
    ("aug", (0, 4, 8)),
    ("sus2", (0, 2, 7)),
    ("sus4", (0, 5, 7)),
    ("7", (0, 4, 7, 10)),
    ("maj7", (0, 4, 7, 11)),
    ("m7", (0, 3, 7, 10)),
)


class ExtractionMode(str, Enum):
    SOUNDING = "sounding"
    ONSET_ONLY = "onset_only"


@dataclass(frozen=True)
class ChordFrame:
    """Tek vuruşluk akor. `is_silent` karşılaştırmaya katılmaz (matriste taşınmaz)."""
    root: int
    bass: int
    chroma: Tuple[int, ...]
    is_silent: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.chroma) != 12:
            raise ValueError("chroma must have 12 entries")
        if not (0 <= self.root < 12 and 0 <= self.bass < 12):
            raise ValueError("root and bass must be pitch classes 0-11")
        if not self.is_silent and not any(self.chroma):
            raise ValueError("a sounding frame needs at least one chroma bit")

    @property
    def pitch_classes(self) -> FrozenSet[int]:
        return frozenset(i for i, bit in enumerate(self.chroma) if bit)

    def to_vector(self) -> np.ndarray:
        vec = np.zeros(CHORD_DIM, dtype=np.int64)
        vec[self.root] = 1
        vec[12 + self.bass] = 1
        vec[24:] = self.chroma
        return vec


SILENT_FRAME = ChordFrame(0, 0, (0,) * 12, is_silent=True)


@dataclass(frozen=True)
class ChordProgression:
    frames: Tuple[ChordFrame, ...]

    def __post_init__(self) -> None:
        if len(self.frames) != SEGMENT_BEATS:
            raise ValueError(f"a progression has exactly {SEGMENT_BEATS} frames, got {len(self.frames)}")

    @property
    def roots(self) -> List[int]:
        return [f.root for f in self.frames]


def _chroma_tuple(pitch_classes) -> Tuple[int, ...]:
    return tuple(1 if i in pitch_classes else 0 for i in range(12))


def template_score(observed: FrozenSet[int], template: FrozenSet[int]) -> float:
    hit = len(observed & template)
    return hit - 0.5 * len(template - observed) - 0.3 * len(observed - template)


def best_root(observed: FrozenSet[int], bass: int) -> Tuple[int, str]:
    """Sözlükteki en iyi (kök, nitelik) çiftini döndürür."""
    best_key = None
    best = (0, "maj")
    for quality_index, (quality, intervals) in enumerate(CHORD_TEMPLATES):
        for root in range(12):
            template = frozenset((root + i) % 12 for i in intervals)
            score = template_score(observed, template)
            key = (-score, len(intervals), (root - bass) % 12, quality_index)
            if best_key is None or key < best_key:
                best_key = key
                best = (root, quality)
    return best


def _beat_pitches(seg: Segment, beat: int, mode: ExtractionMode) -> List[int]:
    lo = beat * STEPS_PER_BEAT
    hi = lo + STEPS_PER_BEAT
    if mode == ExtractionMode.ONSET_ONLY:
        return [n.pitch for n in seg.notes if lo <= n.onset < hi]
    return [n.pitch for n in seg.notes if n.onset < hi and n.onset + n.duration > lo]


def extract_progression(seg: Segment, mode: str = ExtractionMode.SOUNDING) -> ChordProgression:
    """
    Segment -> vuruş çözünürlüğünde akor dizisi.

    Sessiz vuruşlar önceki kareyi taşır; ilk vuruş sessizse kök=bas=0,
    chroma boş ve `is_silent` işaretli.
    """
    mode = ExtractionMode(mode)
    frames: List[ChordFrame] = []
    previous: Optional[ChordFrame] = None
    for beat in range(SEGMENT_BEATS):
        pitches = _beat_pitches(seg, beat, mode)
        if not pitches:
            if previous is None:
                frame = SILENT_FRAME
            else:
                frame = ChordFrame(previous.root, previous.bass, previous.chroma, is_silent=True)
        else:
            observed = frozenset(p % 12 for p in pitches)
            bass = min(pitches) % 12
            root, _quality = best_root(observed, bass)
            frame = ChordFrame(root, bass, _chroma_tuple(observed))
        frames.append(frame)
        previous = frame
    return ChordProgression(tuple(frames))


def encode_matrix(prog: ChordProgression) -> np.ndarray:
    """ChordProgression -> 36x8 ikili matris (sütunlar vuruş sırasında)."""
    return np.stack([f.to_vector() for f in prog.frames], axis=1)


def decode_matrix(mat: np.ndarray) -> ChordProgression:
    mat = np.asarray(mat)
    if mat.shape != (CHORD_DIM, SEGMENT_BEATS):
        raise MalformedChordMatrixError(f"chord matrix must be 36x8, got {mat.shape}")
    if not np.isin(mat, (0, 1)).all():
        raise MalformedChordMatrixError("chord matrix entries must be 0 or 1")
    frames = []
    for beat in range(SEGMENT_BEATS):
        col = mat[:, beat].astype(int)
        chroma = tuple(int(v) for v in col[24:])
        silent = not any(chroma)
        root_bits = np.flatnonzero(col[:12])
        bass_bits = np.flatnonzero(col[12:24])
        if len(root_bits) != 1 or len(bass_bits) != 1:
            if not silent:
                raise MalformedChordMatrixError(
                    f"beat {beat}: expected one root bit and one bass bit, "
                    f"got {len(root_bits)} and {len(bass_bits)}"
                )
            frames.append(SILENT_FRAME)
            continue
        frames.append(ChordFrame(int(root_bits[0]), int(bass_bits[0]), chroma, is_silent=silent))
    return ChordProgression(tuple(frames))


def rotate_frame(frame: ChordFrame, semitones: int) -> ChordFrame:
    chroma = tuple(frame.chroma[(i - semitones) % 12] for i in range(12))
    return ChordFrame((frame.root + semitones) % 12, (frame.bass + semitones) % 12, chroma, frame.is_silent)


def progression_matrices(progressions: Sequence[ChordProgression]) -> np.ndarray:
    """(N, 36, 8) float32 tensör girişi."""
    return np.stack([encode_matrix(p) for p in progressions]).astype(np.float32)
