from chordtex.chords.extract import (
    CHORD_DIM,
    CHORD_TEMPLATES,
    SILENT_FRAME,
    ChordFrame,
    ChordProgression,
    ExtractionMode,
    decode_matrix,
    encode_matrix,
    extract_progression,
    progression_matrices,
    rotate_frame,
)
from chordtex.chords.labels import (
    frame_label,
    parse_chord_symbol,
    progression_from_labels,
    progression_label,
    progressions_from_labels,
    read_label_file,
    split_label_string,
)

__all__ = [
    "CHORD_DIM", "CHORD_TEMPLATES", "SILENT_FRAME", "ChordFrame", "ChordProgression", "ExtractionMode",
    "decode_matrix", "encode_matrix", "extract_progression", "frame_label", "parse_chord_symbol",
    "progression_from_labels", "progression_label", "progression_matrices", "progressions_from_labels",
    "read_label_file", "rotate_frame", "split_label_string",
]
