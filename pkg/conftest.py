# -*- coding: utf-8 -*-
"""
Ortak pytest fixture'ları
=========================

Küçük boyutlu model yapılandırması, sentetik segmentler ve geçici MIDI
dosyaları üretir. Tüm testler CPU üzerinde çalışır.
"""

from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pretty_midi
import pytest
import torch

from chordtex.model import ChordTextureVAE, ModelConfig
from chordtex.score import Segment

# C - Am - F - G, vuruş başına bir akor (kök konumunda, orta oktav)
PROGRESSION_PITCHES = [
    (48, 60, 64, 67), (48, 60, 64, 67),
    (45, 57, 60, 64), (45, 57, 60, 64),
    (41, 53, 57, 60), (41, 53, 57, 60),
    (43, 55, 59, 62), (43, 55, 59, 62),
]


@pytest.fixture
def tiny_config() -> ModelConfig:
    return ModelConfig(
        z_chd_dim=8, z_txt_dim=8, chord_enc_hidden=16, chord_dec_hidden=16, texture_enc_hidden=16,
        conv_channels=2, frame_hidden=32, note_hidden=16, pitch_embed=8, duration_embed=4,
        summary_hidden=8, duration_hidden=8, max_notes=4,
    )


@pytest.fixture
def tiny_vae(tiny_config) -> ChordTextureVAE:
    torch.manual_seed(0)
    return ChordTextureVAE(tiny_config).eval()


def block_chords(beats: Sequence[Tuple[int, ...]], song_id: str = "song", start_beat: int = 0,
                 duration: int = 4) -> Segment:
    """Her vuruşun başında verilen perdeleri çalan segment."""
    notes = [(4 * b, p, duration) for b, pitches in enumerate(beats) for p in pitches]
    return Segment.from_notes(notes, song_id, start_beat)


def arpeggio(beats: Sequence[Tuple[int, ...]], song_id: str = "song", start_beat: int = 0) -> Segment:
    """Her vuruştaki perdeleri 1/4 vuruş aralıkla sırayla çalan segment."""
    notes = []
    for b, pitches in enumerate(beats):
        for k, p in enumerate(sorted(pitches)[:4]):
            notes.append((4 * b + k, p, 1))
    return Segment.from_notes(notes, song_id, start_beat)


@pytest.fixture
def chord_segment() -> Segment:
    return block_chords(PROGRESSION_PITCHES, "cadence", 0)


@pytest.fixture
def segment_factory() -> Callable[..., Segment]:
    return block_chords


@pytest.fixture
def arpeggio_factory() -> Callable[..., Segment]:
    return arpeggio


@pytest.fixture
def random_segments() -> Callable[[int, int], List[Segment]]:
    """Tohumlu rastgele segmentler (orta perde aralığında)."""

    def make(count: int, seed: int = 0, song_id: str = "rand") -> List[Segment]:
        rng = np.random.default_rng(seed)
        segments = []
        for i in range(count):
            notes = []
            for _ in range(int(rng.integers(4, 20))):
                onset = int(rng.integers(0, 32))
                notes.append((onset, int(rng.integers(40, 90)), int(rng.integers(1, 33 - onset))))
            segments.append(Segment.from_notes(notes, song_id, 8 * i))
        return segments

    return make


def write_test_midi(path: str, tracks: Dict[str, List[Tuple[float, float, int]]],
                    meter: Tuple[int, int] = (4, 4), qpm: float = 120.0,
                    extra_meter: Optional[Tuple[float, int, int]] = None) -> str:
    """
    tracks: {iz adı: [(başlangıç vuruşu, bitiş vuruşu, perde)]}
    extra_meter: (saniye, pay, payda) ikinci ölçü değişimi
    """
    midi = pretty_midi.PrettyMIDI(initial_tempo=qpm)
    midi.time_signature_changes.append(pretty_midi.TimeSignature(meter[0], meter[1], 0.0))
    if extra_meter is not None:
        midi.time_signature_changes.append(pretty_midi.TimeSignature(extra_meter[1], extra_meter[2], extra_meter[0]))
    sec = 60.0 / qpm
    for name, notes in tracks.items():
        inst = pretty_midi.Instrument(program=0, name=name)
        for start, end, pitch in notes:
            inst.notes.append(pretty_midi.Note(velocity=80, pitch=pitch, start=start * sec, end=end * sec))
        midi.instruments.append(inst)
    midi.write(str(path))
    return str(path)


def progression_notes(bars: int, offset: float = 0.0) -> List[Tuple[float, float, int]]:
    """Her vuruşta bir akor; `bars` adet 4/4 ölçü."""
    notes = []
    for beat in range(4 * bars):
        pitches = PROGRESSION_PITCHES[beat % len(PROGRESSION_PITCHES)]
        notes.extend((offset + beat, offset + beat + 1, p) for p in pitches)
    return notes


@pytest.fixture
def midi_writer() -> Callable[..., str]:
    return write_test_midi


@pytest.fixture
def piano_midi(tmp_path) -> str:
    """8 ölçülük tek izli 4/4 parça (4 birim)."""
    return write_test_midi(tmp_path / "piano.mid", {"PIANO": progression_notes(8)})


@pytest.fixture
def midi_dir(tmp_path) -> str:
    """Beş 4/4 parça ve bir 3/4 parça içeren dizin."""
    root = tmp_path / "midi"
    root.mkdir()
    for i in range(5):
        notes = [(s, e, p + i) for s, e, p in progression_notes(4 + i)]
        write_test_midi(root / f"song{i}.mid", {"PIANO": notes})
    write_test_midi(root / "waltz.mid", {"PIANO": progression_notes(4)}, meter=(3, 4))
    return str(root)


@pytest.fixture
def notes_factory() -> Callable[..., List[Tuple[float, float, int]]]:
    return progression_notes
