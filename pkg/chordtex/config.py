# -*- coding: utf-8 -*-
"""
Uygulama yapılandırması
=======================

YAML dosyası `AppConfig`'e yüklenir (bilinmeyen anahtarlar reddedilir).
Ortam değişkenleri (.env desteklenir):

- CHORDTEX_DATA_ROOT: `data.root` değerini ezer
- CHORDTEX_DEVICE: torch cihazı (varsayılan cpu)

Öncelik: CLI bayrakları > ortam değişkenleri > YAML > varsayılanlar.
"""

import logging
import os
from typing import List, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from chordtex.arranger.config import ArrangerConfig
from chordtex.chords.extract import ExtractionMode
from chordtex.errors import ConfigError
from chordtex.model.config import ModelConfig
from chordtex.score.types import SEGMENT_BEATS
from chordtex.training.config import TrainConfig

logger = logging.getLogger(__name__)

ENV_DATA_ROOT = "CHORDTEX_DATA_ROOT"
ENV_DEVICE = "CHORDTEX_DEVICE"


class DataConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    root: str = "data"
    corpus_dir: str = "corpus"
    hop_beats: int = Field(SEGMENT_BEATS, ge=1)
    start_beat: int = Field(0, ge=0)
    tracks: Optional[List[str]] = None

    def corpus_path(self) -> str:
        return self.corpus_dir if os.path.isabs(self.corpus_dir) else os.path.join(self.root, self.corpus_dir)


class EvaluationConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    chord_mode: ExtractionMode = ExtractionMode.SOUNDING
    shifts: List[int] = Field(default_factory=lambda: list(range(1, 13)))
    probabilities: List[float] = Field(default_factory=lambda: [round(0.1 * k, 1) for k in range(11)])
    base_seed: int = 0
    plot: bool = True

    @field_validator("probabilities")
    @classmethod
    def validate_probabilities(cls, v: List[float]) -> List[float]:
        if any(not 0.0 <= p <= 1.0 for p in v):
            raise ValueError("probabilities must lie in [0, 1]")
        return v


class GenerationConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    n: int = Field(4, ge=0)
    beats_per_symbol: int = Field(2, ge=1)
    offset_beats: int = Field(0, ge=0)
    qpm: float = Field(120.0, gt=0)


class AppConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    data: DataConfig = Field(default_factory=DataConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    arranger: ArrangerConfig = Field(default_factory=ArrangerConfig)
    evaluation: EvaluationConfig = Field(default_factory=EvaluationConfig)
    generation: GenerationConfig = Field(default_factory=GenerationConfig)


def _apply_env(raw: dict) -> dict:
    data_root = os.getenv(ENV_DATA_ROOT)
    if data_root:
        raw.setdefault("data", {})["root"] = data_root
    device = os.getenv(ENV_DEVICE)
    if device:
        raw.setdefault("train", {})["device"] = device
        raw.setdefault("arranger", {})["device"] = device
    return raw


def load_config(path: Optional[str] = None) -> AppConfig:
    """YAML + ortam değişkenleri -> AppConfig. Hatalar ConfigError olarak yükseltilir."""
    load_dotenv()
    raw: dict = {}
    if path:
        if not os.path.exists(path):
            raise ConfigError(f"Config file not found: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                raw = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            logger.error(f"Config parse failed: {e}")
            raise ConfigError(f"Malformed YAML in {path}: {e}") from e
        if not isinstance(raw, dict):
            raise ConfigError(f"{path} must contain a mapping at the top level")
    try:
        return AppConfig(**_apply_env(raw))
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        logger.error(f"Config validation failed: {e}")
        raise ConfigError(f"Invalid config value at '{where}': {first.get('msg')}") from e
