# -*- coding: utf-8 -*-
"""Eğitim yapılandırması."""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from chordtex.chords.extract import ExtractionMode


class TrainConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    batch_size: int = Field(128, ge=1)
    epochs: int = Field(6, ge=1)
    lr_start: float = Field(1e-3, gt=0)
    lr_floor: float = Field(1e-5, gt=0)
    kl_target: float = Field(0.1, ge=0.0, le=0.1)
    split_fraction: float = Field(0.9, gt=0.0, lt=1.0)
    seed: int = 0
    hop_beats: int = Field(8, ge=1)
    grad_clip: float = Field(10.0, ge=0.0, description="0 kırpmayı kapatır")
    chord_mode: ExtractionMode = ExtractionMode.SOUNDING
    num_workers: int = Field(0, ge=0)
    device: str = "cpu"
    max_steps: Optional[int] = Field(None, ge=1, description="Küçük deneyler için adım sınırı")
    log_every: int = Field(50, ge=1)

    @model_validator(mode="after")
    def check_lr(self) -> "TrainConfig":
        if self.lr_floor > self.lr_start:
            raise ValueError("lr_floor must not exceed lr_start")
        return self
