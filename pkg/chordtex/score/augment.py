# -*- coding: utf-8 -*-
"""
Augmentasyon operatörleri
=========================

- transpose (F_i): tüm notaları i yarım ton kaydırır
- perturb_pitch (P_i): her vuruşu olasılıkla seçip tüm notalarını +-1 yarım ton kaydırır
- halve_durations (R_i): her notanın süresini olasılıkla yarıya indirir

Hepsi saf fonksiyondur: aynı (segment, parametre, tohum) -> aynı çıktı.
"""

import numpy as np

from chordtex.score.types import PITCH_COUNT, SEGMENT_BEATS, STEPS_PER_BEAT, Segment


def transpose(seg: Segment, semitones: int) -> Segment:
    """[0, 127] dışına çıkan notalar atılır (kırpılmaz)."""
    if semitones == 0:
        return seg
    shifted = [(n.onset, n.pitch + semitones, n.duration) for n in seg.notes
               if 0 <= n.pitch + semitones < PITCH_COUNT]
    return seg.with_notes(shifted)


def perturb_pitch(seg: Segment, prob: float, rng: np.random.Generator) -> Segment:
    if not 0.0 <= prob <= 1.0:
        raise ValueError("prob must be in [0, 1]")
    # seçim ve yön her vuruş için önceden çekilir; prob ne olursa olsun aynı rng tüketimi
    selected = rng.random(SEGMENT_BEATS) < prob
    directions = np.where(rng.integers(0, 2, SEGMENT_BEATS) == 1, 1, -1)
    if not selected.any():
        return seg
    notes = []
    for n in seg.notes:
        beat = n.onset // STEPS_PER_BEAT
        shift = int(directions[beat]) if selected[beat] else 0
        if 0 <= n.pitch + shift < PITCH_COUNT:
            notes.append((n.onset, n.pitch + shift, n.duration))
    return seg.with_notes(notes)


def halve_durations(seg: Segment, prob: float, rng: np.random.Generator) -> Segment:
    if not 0.0 <= prob <= 1.0:
        raise ValueError("prob must be in [0, 1]")
    selected = rng.random(len(seg.notes)) < prob
    if not selected.any():
        return seg
    notes = [(n.onset, n.pitch, max(1, n.duration // 2) if pick else n.duration)
             for n, pick in zip(seg.notes, selected)]
    return seg.with_notes(notes)
