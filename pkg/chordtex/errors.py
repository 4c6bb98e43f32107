# -*- coding: utf-8 -*-
"""
Hata hiyerarşisi
================

Tüm alan hataları `ChordTexError`'dan türer. `exit_code` CLI tarafından
çıkış kodu olarak, `remedy` ise tek satırlık çözüm önerisi olarak kullanılır.
"""

from typing import Optional


class ChordTexError(Exception):
    """Kök hata sınıfı."""
    exit_code: int = 1
    remedy: str = "Run the command with --help for usage."


class UsageError(ChordTexError):
    exit_code = 1


class ConfigError(ChordTexError):
    """Bozuk veya bilinmeyen anahtarlı yapılandırma."""
    exit_code = 4
    remedy = "Fix the YAML config (see config.example.yaml for valid keys)."


# ---------- Veri hataları (exit 2) ----------
class DataError(ChordTexError):
    exit_code = 2
    remedy = "Check the input paths and files."


class MidiParseError(DataError):
    """MIDI dosyası okunamadı; mümkünse bayt ofsetini taşır."""

    def __init__(self, path: str, reason: str, offset: Optional[int] = None) -> None:
        self.path = path
        self.offset = offset
        where = f" at byte offset {offset}" if offset is not None else ""
        super().__init__(f"Cannot parse MIDI file {path}{where}: {reason}")

    remedy = "Make sure the file is a valid Standard MIDI File."


class UnsupportedMidiFormatError(DataError):
    remedy = "Convert the file to SMF format 0 or 1."


class EmptySongError(DataError):
    remedy = "The MIDI file has no note events; pick another file."


class MidiWriteError(DataError):
    remedy = "Check that the output directory exists and is writable."


class EmptyCorpusError(DataError):
    remedy = "Run `preprocess` on a directory with at least two 2/4 or 4/4 songs."


class EmptyTestSetError(DataError):
    remedy = "Point --corpus/--test-dir at data with at least one test segment."


class MalformedChordMatrixError(DataError):
    remedy = "Each chord column needs exactly one root bit and one bass bit."


class MalformedPianoRollError(DataError):
    remedy = "Texture input must be a (B, 128, 32) duration matrix."


class ChordLabelError(DataError):
    remedy = "Use symbols like C, Am, F#m7, Bbmaj7, Gsus4, C/E or N."


class CheckpointError(DataError):
    remedy = "Pass a checkpoint written by `train` / `train-arranger`."


class LengthMismatchError(DataError):
    remedy = "Both pieces must have the same number of 8-beat units."


class PrefixTooLongError(DataError):
    remedy = "The accompaniment prefix cannot be longer than the arranged window."


# ---------- Sayısal hatalar (exit 3) ----------
class NumericError(ChordTexError):
    exit_code = 3
    remedy = "Lower the learning rate or resume from the last good checkpoint."


class TrainingDivergenceError(NumericError):
    """Kayıp sonlu değil; batch kimliği ve son sağlam checkpoint ile birlikte."""

    def __init__(self, batch_id: str, step: Optional[int] = None,
                 last_checkpoint: Optional[str] = None) -> None:
        self.batch_id = batch_id
        self.step = step
        self.last_checkpoint = last_checkpoint
        msg = f"Non-finite loss at batch {batch_id}"
        if step is not None:
            msg += f" (step {step})"
        if last_checkpoint:
            msg += f"; last good checkpoint: {last_checkpoint}"
        super().__init__(msg)


class EvaluationError(NumericError):
    pass
