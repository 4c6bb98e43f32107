# -*- coding: utf-8 -*-
"""
MIDI Okuma / Yazma
==================

Standard MIDI File (format 0/1) okur, format 1 yazar. Ayrıştırma pretty_midi
ile yapılır; chunk yapısı önceden elle doğrulanır ki bozuk dosyalarda hatanın
bayt ofseti raporlanabilsin.

Özellikler:
- Her nota izi kendi adıyla korunur (ör. MELODY / BRIDGE / PIANO)
- Ölçü (meter) ve tempo haritası vuruş cinsinden
- Segment, segment listesi, {iz adı: segmentler} ya da Song yazılabilir
"""

import logging
import os
import struct
from typing import Dict, List, Mapping, Optional, Sequence, Union

import pretty_midi

from chordtex.errors import (
    EmptySongError,
    MidiParseError,
    MidiWriteError,
    UnsupportedMidiFormatError,
)
from chordtex.score.types import (
    SEGMENT_BEATS,
    STEPS_PER_BEAT,
    MeterChange,
    Segment,
    Song,
    SongNote,
    TempoChange,
)

logger = logging.getLogger(__name__)

DEFAULT_TRACK = "PIANO"
DEFAULT_QPM = 120.0
WRITE_RESOLUTION = 480

MidiSource = Union[Song, Segment, Sequence[Segment], Mapping[str, Union[Segment, Sequence[Segment]]]]


def _check_smf_structure(path: str, data: bytes) -> int:
    """MThd/MTrk chunk yürüyüşü; SMF formatını döndürür."""
    if len(data) < 14 or data[:4] != b"MThd":
        raise MidiParseError(path, "missing MThd header chunk", offset=0)
    header_len = struct.unpack(">I", data[4:8])[0]
    if header_len < 6:
        raise MidiParseError(path, f"header chunk too short ({header_len} bytes)", offset=4)
    fmt, ntracks, _division = struct.unpack(">HHH", data[8:14])
    if fmt == 2:
        raise UnsupportedMidiFormatError(f"{path}: SMF format 2 is not supported")
    if fmt > 2:
        raise MidiParseError(path, f"unknown SMF format {fmt}", offset=8)

    offset = 8 + header_len
    found = 0
    while offset < len(data):
        if offset + 8 > len(data):
            raise MidiParseError(path, "truncated chunk header", offset=offset)
        chunk_type = data[offset:offset + 4]
        length = struct.unpack(">I", data[offset + 4:offset + 8])[0]
        if offset + 8 + length > len(data):
            raise MidiParseError(path, f"chunk {chunk_type!r} runs past end of file", offset=offset)
        if chunk_type == b"MTrk":
            found += 1
        offset += 8 + length
    if found < ntracks:
        raise MidiParseError(path, f"header declares {ntracks} tracks but {found} found", offset=offset)
    return fmt


def _meter_map(midi: pretty_midi.PrettyMIDI) -> List[MeterChange]:
    changes = sorted(midi.time_signature_changes, key=lambda ts: ts.time)
    if not changes:
        return [MeterChange(0, 4, 4, 0.0)]
    meter: List[MeterChange] = []
    bar = 0.0
    prev_beat = 0.0
    prev_bar_len = 4.0
    for ts in changes:
        beat = midi.time_to_tick(ts.time) / midi.resolution
        bar += (beat - prev_beat) / prev_bar_len
        meter.append(MeterChange(int(round(bar)), ts.numerator, ts.denominator, beat))
        prev_beat = beat
        prev_bar_len = ts.numerator * 4.0 / ts.denominator
    if meter[0].beat > 0:
        meter.insert(0, MeterChange(0, 4, 4, 0.0))
    return meter


def _tempo_map(midi: pretty_midi.PrettyMIDI) -> List[TempoChange]:
    times, tempi = midi.get_tempo_changes()
    return [TempoChange(midi.time_to_tick(t) / midi.resolution, float(q)) for t, q in zip(times, tempi)]


def load_midi(path: str, song_id: Optional[str] = None) -> Song:
    """
    MIDI dosyasını Song'a çevirir.

    Raises:
        MidiParseError: okunamayan dosya (bayt ofseti ile)
        UnsupportedMidiFormatError: SMF format 2
        EmptySongError: hiç nota yok
    """
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as e:
        raise MidiParseError(path, str(e)) from e

    _check_smf_structure(path, data)
    try:
        midi = pretty_midi.PrettyMIDI(path)
    except Exception as e:
        raise MidiParseError(path, f"event stream error: {e}") from e

    tracks: Dict[str, List[SongNote]] = {}
    for index, inst in enumerate(midi.instruments):
        if inst.is_drum or not inst.notes:
            continue
        name = inst.name.strip() or f"track{index}"
        if name in tracks:
            name = f"{name}_{index}"
        res = midi.resolution
        tracks[name] = [
            SongNote(midi.time_to_tick(n.start) / res, midi.time_to_tick(n.end) / res, int(n.pitch), int(n.velocity))
            for n in inst.notes
            if 0 <= n.pitch <= 127
        ]

    if not any(tracks.values()):
        raise EmptySongError(f"{path}: no note events")

    song = Song(
        song_id=song_id or os.path.splitext(os.path.basename(path))[0],
        tracks=tracks,
        meter=_meter_map(midi),
        tempo=_tempo_map(midi),
    )
    logger.debug(f"Loaded {path}: {len(tracks)} tracks, {song.note_count} notes")
    return song


def _add_segments(inst: pretty_midi.Instrument, segments: Sequence[Segment], sec_per_step: float) -> None:
    for k, seg in enumerate(segments):
        base = k * SEGMENT_BEATS * STEPS_PER_BEAT
        for note in seg.notes:
            start = (base + note.onset) * sec_per_step
            end = (base + note.onset + note.duration) * sec_per_step
            inst.notes.append(pretty_midi.Note(velocity=80, pitch=note.pitch, start=start, end=end))


def _apply_tempo_map(midi: pretty_midi.PrettyMIDI, tempo: Sequence[TempoChange]) -> None:
    """Tempo haritasını tick ölçeklerine yazar; pretty_midi tempo olaylarını buradan üretir."""
    changes = sorted(tempo, key=lambda t: t.beat) or [TempoChange(0.0, DEFAULT_QPM)]
    if changes[0].beat > 0:
        changes.insert(0, TempoChange(0.0, changes[0].qpm))
    res = midi.resolution
    midi._tick_scales = [(int(round(t.beat * res)), 60.0 / (t.qpm * res)) for t in changes]  # type: ignore[attr-defined]
    midi._tick_to_time = [0.0]  # type: ignore[attr-defined]


def _beat_time(midi: pretty_midi.PrettyMIDI, beat: float) -> float:
    return midi.tick_to_time(int(round(beat * midi.resolution)))


def write_midi(source: MidiSource, path: str, qpm: float = DEFAULT_QPM) -> str:
    """
    Segment(ler) ya da Song'u SMF format-1 dosyasına yazar.

    Segment listeleri `qpm` tempolu 4/4 içinde ardışık 8 vuruşluk birimler
    olarak yerleştirilir. Song verilirse ölçü ve tempo haritası Song'dan
    alınır, `qpm` kullanılmaz.
    """
    midi = pretty_midi.PrettyMIDI(resolution=WRITE_RESOLUTION, initial_tempo=qpm)

    if isinstance(source, Song):
        _apply_tempo_map(midi, source.tempo)
        for m in source.meter:
            midi.time_signature_changes.append(
                pretty_midi.TimeSignature(m.numerator, m.denominator, _beat_time(midi, m.beat)))
        for name, notes in source.tracks.items():
            inst = pretty_midi.Instrument(program=0, name=name)
            for n in notes:
                inst.notes.append(pretty_midi.Note(
                    velocity=n.velocity, pitch=n.pitch,
                    start=_beat_time(midi, n.start_beat), end=_beat_time(midi, n.end_beat),
                ))
            midi.instruments.append(inst)
    else:
        midi.time_signature_changes.append(pretty_midi.TimeSignature(4, 4, 0.0))
        sec_per_step = 60.0 / qpm / STEPS_PER_BEAT
        if isinstance(source, Segment):
            named = {DEFAULT_TRACK: [source]}
        elif isinstance(source, Mapping):
            named = {k: [v] if isinstance(v, Segment) else list(v) for k, v in source.items()}
        else:
            named = {DEFAULT_TRACK: list(source)}
        for name, segments in named.items():
            inst = pretty_midi.Instrument(program=0, name=name)
            _add_segments(inst, segments, sec_per_step)
            midi.instruments.append(inst)

    try:
        midi.write(path)
    except OSError as e:
        raise MidiWriteError(f"Cannot write MIDI file {path}: {e}") from e
    logger.debug(f"Wrote {path}")
    return path
