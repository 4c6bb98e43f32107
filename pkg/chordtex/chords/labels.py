# -*- coding: utf-8 -*-
"""
Harici akor etiketleri
======================

Gramer (vuruş başına bir sembol):

    sembol  := "N" | kök nitelik? ("/" bas)?
    kök     := [A-G] [#b]?
    nitelik := "" | maj | m | min | dim | aug | 7 | maj7 | m7 | min7 | sus2 | sus4

"N" sessiz vuruştur ve önceki akoru taşır. Etiket dosyasında boş satırlar ve
`#` ile başlayan satırlar yok sayılır; bir satırda boşlukla ayrılmış birden
çok sembol olabilir.
"""

import re
from typing import List, Optional, Sequence

from chordtex.chords.extract import (
    CHORD_TEMPLATES,
    SILENT_FRAME,
    ChordFrame,
    ChordProgression,
    template_score,
)
from chordtex.errors import ChordLabelError, DataError
from chordtex.score.types import SEGMENT_BEATS

NOTE_NAMES = ("C", "C#", "D", "Eb", "E", "F", "F#", "G", "Ab", "A", "Bb", "B")
_LETTER_PC = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}
_QUALITY_ALIASES = {"": "maj", "maj": "maj", "m": "min", "min": "min", "dim": "dim", "aug": "aug",
                    "7": "7", "maj7": "maj7", "m7": "m7", "min7": "m7", "sus2": "sus2", "sus4": "sus4"}
_QUALITY_SUFFIX = {"maj": "", "min": "m", "dim": "dim", "aug": "aug", "7": "7",
                   "maj7": "maj7", "m7": "m7", "sus2": "sus2", "sus4": "sus4"}
_SYMBOL_RE = re.compile(
    r"^(?P<root>[A-G][#b]?)(?P<quality>maj7|maj|min7|min|m7|m|dim|aug|sus2|sus4|7)?"
    r"(?:/(?P<bass>[A-G][#b]?))?$"
)


def _pitch_class(name: str) -> int:
    pc = _LETTER_PC[name[0]]
    if name.endswith("#"):
        pc += 1
    elif len(name) > 1 and name.endswith("b"):
        pc -= 1
    return pc % 12


def parse_chord_symbol(text: str, previous: Optional[ChordFrame] = None) -> ChordFrame:
    """Tek akor sembolünü ChordFrame'e çevirir; chroma şablonun kendisidir."""
    symbol = text.strip()
    if symbol == "N":
        if previous is None:
            return SILENT_FRAME
        return ChordFrame(previous.root, previous.bass, previous.chroma, is_silent=True)
    match = _SYMBOL_RE.match(symbol)
    if not match:
        raise ChordLabelError(f"Invalid chord symbol: {text!r}")
    root = _pitch_class(match.group("root"))
    quality = _QUALITY_ALIASES[match.group("quality") or ""]
    intervals = dict(CHORD_TEMPLATES)[quality]
    bass = _pitch_class(match.group("bass")) if match.group("bass") else root
    pcs = {(root + i) % 12 for i in intervals} | {bass}
    return ChordFrame(root, bass, tuple(1 if i in pcs else 0 for i in range(12)))


def progression_from_labels(symbols: Sequence[str], beats_per_symbol: int = 1) -> ChordProgression:
    """Sembol listesinden 8 vuruşluk akor dizisi (eksikse son akor uzatılır)."""
    if beats_per_symbol < 1:
        raise ChordLabelError("beats_per_symbol must be >= 1")
    if not symbols:
        raise ChordLabelError("Empty chord label sequence")
    frames: List[ChordFrame] = []
    previous: Optional[ChordFrame] = None
    for symbol in symbols:
        frame = parse_chord_symbol(symbol, previous)
        frames.extend([frame] * beats_per_symbol)
        previous = frame
    if len(frames) > SEGMENT_BEATS:
        raise ChordLabelError(f"{len(frames)} beats of chords given; a progression holds {SEGMENT_BEATS}")
    while len(frames) < SEGMENT_BEATS:
        frames.append(frames[-1])
    return ChordProgression(tuple(frames))


def split_label_string(text: str) -> List[str]:
    """'C Am F G' ya da 'C-Am-F-G' biçimini sembollere ayırır."""
    return [s for s in re.split(r"[\s,|\-]+", text.strip()) if s]


def progressions_from_labels(symbols: Sequence[str], beats_per_symbol: int = 1) -> List[ChordProgression]:
    """Uzun etiket dizisini ardışık 8 vuruşluk dizilere böler."""
    per_unit = max(1, SEGMENT_BEATS // beats_per_symbol)
    return [progression_from_labels(symbols[i:i + per_unit], beats_per_symbol)
            for i in range(0, len(symbols), per_unit)]


def read_label_file(path: str) -> List[str]:
    symbols: List[str] = []
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.readlines()
    except OSError as e:
        raise DataError(f"Cannot read chord label file {path}: {e}") from e
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        symbols.extend(line.split())
    return symbols


def frame_label(frame: ChordFrame) -> str:
    """Karenin kökünde en iyi eşleşen şablonun sembolü."""
    if not any(frame.chroma):
        return "N"
    observed = frame.pitch_classes
    best_quality = max(
        CHORD_TEMPLATES,
        key=lambda qt: template_score(observed, frozenset((frame.root + i) % 12 for i in qt[1])),
    )[0]
    label = NOTE_NAMES[frame.root] + _QUALITY_SUFFIX[best_quality]
    if frame.bass != frame.root:
        label += "/" + NOTE_NAMES[frame.bass]
    return label


def progression_label(prog: ChordProgression) -> str:
    labels = [frame_label(f) for f in prog.frames]
    compact = [labels[0]] + [b for a, b in zip(labels, labels[1:]) if a != b]
    return "-".join(compact)
