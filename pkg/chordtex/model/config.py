# -*- coding: utf-8 -*-
"""VAE boyut yapılandırması."""

from pydantic import BaseModel, ConfigDict, Field


class ModelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    z_chd_dim: int = Field(256, ge=1)
    z_txt_dim: int = Field(256, ge=1)
    chord_enc_hidden: int = Field(256, ge=1)
    chord_dec_hidden: int = Field(512, ge=1)
    texture_enc_hidden: int = Field(512, ge=1)

    # doku kodlayıcı konvolüsyonu: 1 -> 10 kanal, çekirdek 12x4, adım 1x4, havuz 4x1
    conv_channels: int = Field(10, ge=1)

    # PianoTree çözücü
    frame_hidden: int = Field(1024, ge=1)
    note_hidden: int = Field(512, ge=1)
    pitch_embed: int = Field(128, ge=1)
    duration_embed: int = Field(16, ge=1)
    summary_hidden: int = Field(256, ge=1)
    duration_hidden: int = Field(64, ge=1)
    max_notes: int = Field(16, ge=1)

    @property
    def z_dim(self) -> int:
        return self.z_chd_dim + self.z_txt_dim

    @property
    def note_embed(self) -> int:
        return self.pitch_embed + self.duration_embed
