from chordtex.score.augment import halve_durations, perturb_pitch, transpose
from chordtex.score.corpus_store import load_corpus, save_corpus
from chordtex.score.midi_io import load_midi, write_midi
from chordtex.score.segmentation import SegmentationResult, quantize_and_segment, segment_songs
from chordtex.score.types import (
    PITCH_COUNT,
    SEGMENT_BEATS,
    SEGMENT_STEPS,
    STEPS_PER_BEAT,
    MeterChange,
    NoteEvent,
    Segment,
    Song,
    SongNote,
    TempoChange,
    from_matrix,
    to_matrix,
)

__all__ = [
    "PITCH_COUNT", "SEGMENT_BEATS", "SEGMENT_STEPS", "STEPS_PER_BEAT",
    "MeterChange", "NoteEvent", "Segment", "SegmentationResult", "Song", "SongNote", "TempoChange",
    "from_matrix", "halve_durations", "load_corpus", "load_midi", "perturb_pitch",
    "quantize_and_segment", "save_corpus", "segment_songs", "to_matrix", "transpose", "write_midi",
]
