# -*- coding: utf-8 -*-
"""Arranger (melodi -> eşlik gizilleri) yapılandırması."""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from chordtex.chords.extract import ExtractionMode


class ArrangerConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    hidden: int = Field(256, ge=8)
    layers: int = Field(4, ge=1)
    heads: int = Field(8, ge=1)
    feedforward: int = Field(1024, ge=8)
    dropout: float = Field(0.1, ge=0.0, lt=1.0)
    max_positions: int = Field(16, ge=8)
    units_per_sample: int = Field(4, ge=1)

    # temel melodi gömücü (perde ve ritim için iki GRU)
    melody_dim: int = Field(256, ge=1)
    melody_hidden: int = Field(256, ge=1)

    lr: float = Field(1e-3, gt=0)
    lr_floor: float = Field(1e-5, gt=0)
    warmup_steps: int = Field(12000, ge=1)
    epochs: int = Field(40, ge=1)
    batch_size: int = Field(32, ge=1)
    grad_clip: float = Field(1.0, ge=0.0)
    seed: int = 0
    chord_mode: ExtractionMode = ExtractionMode.SOUNDING
    device: str = "cpu"

    @model_validator(mode="after")
    def check_shapes(self) -> "ArrangerConfig":
        if self.hidden % self.heads:
            raise ValueError("hidden must be divisible by heads")
        if self.hidden % 2:
            raise ValueError("hidden must be even for sinusoidal positions")
        if self.units_per_sample > self.max_positions:
            raise ValueError("units_per_sample cannot exceed max_positions")
        return self
