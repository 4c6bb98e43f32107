# -*- coding: utf-8 -*-
"""
Segment korpusunun diskte saklanması
====================================

Her parça için bir `<song_id>.joblib` kaydı yazılır:

    {
        "format_version": 1,
        "song_id": str,
        "meter": [(bar, numerator, denominator), ...],
        "segments": [{"start_beat": int, "notes": int16 array (n, 3)}, ...],
        "created_at": "YYYY-mm-dd HH:MM:SS",
    }

`notes` satırları (onset, pitch, duration) üçlüleridir.
"""

import logging
import os
from datetime import datetime
from typing import Dict, List, Mapping, Optional, Sequence

import joblib
import numpy as np

from chordtex.errors import DataError
from chordtex.score.types import MeterChange, Segment

logger = logging.getLogger(__name__)

CORPUS_FORMAT_VERSION = 1
RECORD_SUFFIX = ".joblib"


def save_song_record(directory: str, song_id: str, segments: Sequence[Segment],
                     meter: Optional[Sequence[MeterChange]] = None) -> str:
    os.makedirs(directory, exist_ok=True)
    record = {
        "format_version": CORPUS_FORMAT_VERSION,
        "song_id": song_id,
        "meter": [(m.bar, m.numerator, m.denominator) for m in (meter or [])],
        "segments": [{"start_beat": s.start_beat, "notes": s.to_array()} for s in segments],
        "created_at": datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
    }
    path = os.path.join(directory, f"{song_id}{RECORD_SUFFIX}")
    joblib.dump(record, path)
    return path


def save_corpus(directory: str, segments_by_song: Mapping[str, Sequence[Segment]],
                meters: Optional[Mapping[str, Sequence[MeterChange]]] = None) -> List[str]:
    paths = [
        save_song_record(directory, song_id, segments, (meters or {}).get(song_id))
        for song_id, segments in segments_by_song.items()
    ]
    logger.info(f"Saved {len(paths)} song records to {directory}")
    return paths


def load_song_record(path: str) -> List[Segment]:
    try:
        record = joblib.load(path)
    except Exception as e:
        raise DataError(f"Cannot read corpus record {path}: {e}") from e
    version = record.get("format_version") if isinstance(record, dict) else None
    if version != CORPUS_FORMAT_VERSION:
        raise DataError(f"Corpus record {path} has format_version {version}, expected {CORPUS_FORMAT_VERSION}")
    song_id = record["song_id"]
    return [
        Segment.from_notes(np.asarray(item["notes"]).tolist(), song_id, int(item["start_beat"]))
        for item in record["segments"]
    ]


def load_corpus(directory: str, song_ids: Optional[Sequence[str]] = None) -> Dict[str, List[Segment]]:
    """Dizindeki kayıtları {song_id: segmentler} olarak yükler."""
    if not os.path.isdir(directory):
        raise DataError(f"Corpus directory not found: {directory}")
    if song_ids is None:
        song_ids = sorted(f[: -len(RECORD_SUFFIX)] for f in os.listdir(directory) if f.endswith(RECORD_SUFFIX))
    corpus = {}
    for song_id in song_ids:
        corpus[song_id] = load_song_record(os.path.join(directory, f"{song_id}{RECORD_SUFFIX}"))
    return corpus
