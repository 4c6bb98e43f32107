# -*- coding: utf-8 -*-
"""
Score IR testleri
-----------------
1) Segment normalizasyonu ve matris dönüşümü
2) MIDI okuma/yazma ve hata durumları
3) Kuantalama / segmentleme
4) Augmentasyon operatörleri
5) Korpus kayıtları
"""

import numpy as np
import pytest

from chordtex.errors import DataError, EmptySongError, MidiParseError, UnsupportedMidiFormatError
from chordtex.score import (
    Segment,
    from_matrix,
    halve_durations,
    load_corpus,
    load_midi,
    perturb_pitch,
    quantize_and_segment,
    save_corpus,
    segment_songs,
    to_matrix,
    transpose,
    write_midi,
)
from chordtex.score.segmentation import quantize_step
from chordtex.score.types import NoteEvent, Song, SongNote, TempoChange


# ---------- 1) Segment ----------
def test_from_notes_normalizes_and_clips():
    seg = Segment.from_notes([(30, 60, 8), (0, 64, 2), (0, 64, 6), (40, 60, 1), (0, 200, 1)])
    assert seg.triples() == [(0, 64, 6), (30, 60, 2)]


def test_segment_rejects_unsorted_notes():
    with pytest.raises(ValueError):
        Segment((NoteEvent(4, 60, 1), NoteEvent(0, 60, 1)))


def test_note_event_validates_ranges():
    with pytest.raises(ValueError):
        NoteEvent(0, 128, 1)
    with pytest.raises(ValueError):
        NoteEvent(0, 60, 0)


def test_matrix_holds_duration_at_onset(chord_segment):
    mat = to_matrix(chord_segment)
    assert mat.shape == (128, 32)
    assert mat[60, 0] == 4
    assert mat[60, 1] == 0
    assert from_matrix(mat, "cadence", 0) == chord_segment


def test_from_matrix_rejects_overlong_entry():
    mat = np.zeros((128, 32), dtype=int)
    mat[60, 30] = 5
    with pytest.raises(ValueError):
        from_matrix(mat)


# ---------- 2) MIDI ----------
def test_load_midi_reads_tracks_and_meter(piano_midi):
    song = load_midi(piano_midi)
    assert song.song_id == "piano"
    assert list(song.tracks) == ["PIANO"]
    assert song.note_count == 8 * 4 * 4
    assert (song.meter[0].numerator, song.meter[0].denominator) == (4, 4)


def test_load_midi_missing_header(tmp_path):
    path = tmp_path / "bad.mid"
    path.write_bytes(b"RIFF0000garbage-bytes")
    with pytest.raises(MidiParseError) as err:
        load_midi(str(path))
    assert err.value.offset == 0
    assert err.value.exit_code == 2


def test_load_midi_truncated_track(tmp_path, piano_midi):
    data = open(piano_midi, "rb").read()
    path = tmp_path / "truncated.mid"
    path.write_bytes(data[: len(data) // 2])
    with pytest.raises(MidiParseError):
        load_midi(str(path))


def test_load_midi_rejects_format_two(tmp_path):
    header = b"MThd" + (6).to_bytes(4, "big") + (2).to_bytes(2, "big") + (1).to_bytes(2, "big") + (480).to_bytes(2, "big")
    track = b"MTrk" + (4).to_bytes(4, "big") + b"\x00\xff\x2f\x00"
    path = tmp_path / "fmt2.mid"
    path.write_bytes(header + track)
    with pytest.raises(UnsupportedMidiFormatError):
        load_midi(str(path))


def test_load_midi_without_notes(tmp_path, midi_writer):
    path = midi_writer(tmp_path / "empty.mid", {})
    with pytest.raises(EmptySongError):
        load_midi(path)


def test_write_midi_places_segments_back_to_back(tmp_path, chord_segment):
    path = write_midi([chord_segment, chord_segment], str(tmp_path / "out.mid"))
    song = load_midi(path)
    units = quantize_and_segment(song)
    assert len(units) == 2
    assert units[0].triples() == chord_segment.triples()
    assert units[1].triples() == chord_segment.triples()


def test_write_midi_is_deterministic(tmp_path, chord_segment):
    a = write_midi(chord_segment, str(tmp_path / "a.mid"))
    b = write_midi(chord_segment, str(tmp_path / "b.mid"))
    assert open(a, "rb").read() == open(b, "rb").read()


def test_song_round_trip_keeps_duple_meter_and_tempo(tmp_path, midi_writer, notes_factory):
    src = midi_writer(tmp_path / "duple.mid", {"PIANO": notes_factory(4)}, meter=(2, 4), qpm=90.0)
    song = load_midi(src)
    again = load_midi(write_midi(song, str(tmp_path / "again.mid")))
    assert [(m.numerator, m.denominator, m.beat) for m in again.meter] == [(2, 4, 0.0)]
    assert again.tempo[0].qpm == pytest.approx(90.0, rel=1e-4)
    assert again.tracks["PIANO"] == song.tracks["PIANO"]


def test_song_tempo_changes_survive_writing(tmp_path):
    notes = [SongNote(float(b), b + 1.0, 60 + b) for b in range(8)]
    song = Song("tempi", {"PIANO": notes}, tempo=[TempoChange(0.0, 120.0), TempoChange(4.0, 60.0)])
    again = load_midi(write_midi(song, str(tmp_path / "tempi.mid")))
    assert [t.beat for t in again.tempo] == [0.0, 4.0]
    assert [t.qpm for t in again.tempo] == pytest.approx([120.0, 60.0], rel=1e-4)
    assert again.tracks["PIANO"] == notes


def test_write_midi_to_missing_directory(tmp_path, chord_segment):
    with pytest.raises(DataError):
        write_midi(chord_segment, str(tmp_path / "missing" / "x.mid"))


# ---------- 3) Segmentleme ----------
@pytest.mark.parametrize("beat, step", [(0.0, 0), (0.125, 1), (0.1, 0), (0.375, 2), (1.0, 4)])
def test_quantize_step_rounds_half_up(beat, step):
    assert quantize_step(beat) == step


def test_segmentation_drops_trailing_remainder():
    song = Song("s", {"PIANO": [SongNote(b, b + 1, 60) for b in range(20)]})
    segments = quantize_and_segment(song)
    assert [s.start_beat for s in segments] == [0, 8]


def test_segmentation_hop_and_offset():
    song = Song("s", {"PIANO": [SongNote(b, b + 1, 60) for b in range(24)]})
    assert [s.start_beat for s in quantize_and_segment(song, hop_beats=4)] == [0, 4, 8, 12, 16]
    assert [s.start_beat for s in quantize_and_segment(song, start_beat=2)] == [2, 10]


def test_segmentation_clips_notes_crossing_the_boundary():
    song = Song("s", {"PIANO": [SongNote(6.0, 12.0, 60), SongNote(12.0, 16.0, 62)]})
    first, second = quantize_and_segment(song)
    assert first.triples() == [(24, 60, 8)]
    assert second.triples() == [(16, 62, 16)]


def test_segmentation_skips_unsupported_meter(tmp_path, midi_writer, notes_factory):
    waltz = load_midi(midi_writer(tmp_path / "w.mid", {"PIANO": notes_factory(4)}, meter=(3, 4)))
    mixed = load_midi(midi_writer(tmp_path / "m.mid", {"PIANO": notes_factory(4)}, extra_meter=(4.0, 3, 4)))
    plain = load_midi(midi_writer(tmp_path / "p.mid", {"PIANO": notes_factory(4)}))
    result = segment_songs([waltz, mixed, plain])
    assert result.skipped_songs == ["w", "m"]
    assert result.skip_count == 2
    assert len(result.segments_by_song["p"]) == 2


def test_segmentation_selects_tracks():
    song = Song("s", {"MELODY": [SongNote(0, 8, 72)], "PIANO": [SongNote(0, 8, 48)]})
    (seg,) = quantize_and_segment(song, tracks=["PIANO"])
    assert seg.triples() == [(0, 48, 32)]


# ---------- 4) Augmentasyon ----------
def test_transpose_drops_out_of_range_notes():
    seg = Segment.from_notes([(0, 125, 4), (0, 60, 4)])
    assert transpose(seg, 5).triples() == [(0, 65, 4)]
    assert transpose(seg, 0) is seg


def test_perturb_pitch_shifts_whole_beats(chord_segment):
    out = perturb_pitch(chord_segment, 1.0, np.random.default_rng(3))
    before = {b: sorted(n.pitch for n in chord_segment.notes if n.onset // 4 == b) for b in range(8)}
    after = {b: sorted(n.pitch for n in out.notes if n.onset // 4 == b) for b in range(8)}
    for b in range(8):
        shift = after[b][0] - before[b][0]
        assert shift in (-1, 1)
        assert [p + shift for p in before[b]] == after[b]


def test_perturb_pitch_zero_probability_is_identity(chord_segment):
    assert perturb_pitch(chord_segment, 0.0, np.random.default_rng(0)) == chord_segment


def test_augmentation_is_reproducible(chord_segment):
    a = perturb_pitch(chord_segment, 0.5, np.random.default_rng(11))
    b = perturb_pitch(chord_segment, 0.5, np.random.default_rng(11))
    assert a == b


def test_halve_durations_keeps_onsets(chord_segment):
    out = halve_durations(chord_segment, 1.0, np.random.default_rng(0))
    assert [(n.onset, n.pitch) for n in out.notes] == [(n.onset, n.pitch) for n in chord_segment.notes]
    assert all(n.duration == 2 for n in out.notes)


def test_halve_durations_keeps_minimum_length():
    seg = Segment.from_notes([(0, 60, 1)])
    assert halve_durations(seg, 1.0, np.random.default_rng(0)).triples() == [(0, 60, 1)]


def test_augmentation_rejects_bad_probability(chord_segment):
    with pytest.raises(ValueError):
        halve_durations(chord_segment, 1.5, np.random.default_rng(0))


# ---------- 5) Korpus ----------
def test_corpus_records_survive_a_reload(tmp_path, random_segments):
    segments = random_segments(3, seed=4, song_id="alpha")
    save_corpus(str(tmp_path), {"alpha": segments})
    loaded = load_corpus(str(tmp_path))
    assert list(loaded) == ["alpha"]
    assert loaded["alpha"] == segments


def test_load_corpus_missing_directory(tmp_path):
    with pytest.raises(DataError):
        load_corpus(str(tmp_path / "nope"))
