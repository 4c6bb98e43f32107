# -*- coding: utf-8 -*-
"""
Arranger eğitimi
================

Dondurulmuş VAE her eşlik birimi için sonsal ortalama (z_chd, z_txt) hedeflerini
verir. Transformer öğretmen zorlamalı olarak bu hedeflere ortalama kare hata ile
regresyon yapar. lr: 12K adım ısınma, ardından ters karekök azalma.
"""

import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import torch
import torch.nn.functional as F
from torch.utils.data import DataLoader, TensorDataset

from chordtex.arranger.config import ArrangerConfig
from chordtex.arranger.data import PairedSample
from chordtex.arranger.melody import melody_inputs
from chordtex.arranger.model import ArrangerModel
from chordtex.errors import CheckpointError, EmptyCorpusError, TrainingDivergenceError
from chordtex.model.checkpoint import load_checkpoint, save_checkpoint
from chordtex.model.vae import ChordTextureVAE
from chordtex.training.schedules import warmup_inverse_sqrt

logger = logging.getLogger(__name__)

ARRANGER_FORMAT_VERSION = 1


@dataclass
class ArrangerTrainResult:
    epoch_losses: List[float] = field(default_factory=list)
    checkpoint: Optional[str] = None
    global_step: int = 0


def encode_targets(samples: Sequence[PairedSample], vae: ChordTextureVAE,
                   chord_mode: str) -> Tuple[torch.Tensor, torch.Tensor]:
    """(N, U, z_chd_dim), (N, U, z_txt_dim) sonsal ortalama hedefleri."""
    chd, txt = [], []
    for sample in samples:
        z_chd, z_txt = vae.encode_means(sample.accompaniment, chord_mode)
        chd.append(z_chd.cpu())
        txt.append(z_txt.cpu())
    return torch.stack(chd), torch.stack(txt)


def melody_tensors(samples: Sequence[PairedSample]) -> Tuple[torch.Tensor, torch.Tensor]:
    pitch, rhythm = zip(*(melody_inputs(s.melody) for s in samples))
    return torch.stack(pitch), torch.stack(rhythm)


def arranger_loss(model: ArrangerModel, pitch: torch.Tensor, rhythm: torch.Tensor,
                  z_chd: torch.Tensor, z_txt: torch.Tensor) -> torch.Tensor:
    pred_chd, pred_txt = model(pitch, rhythm, z_chd, z_txt)
    return F.mse_loss(pred_chd, z_chd) + F.mse_loss(pred_txt, z_txt)


def save_arranger(path: str, model: ArrangerModel, epoch: int = 0, global_step: int = 0,
                  extra: Optional[Dict[str, Any]] = None) -> str:
    arr = model.arranger
    return save_checkpoint(
        path, model, kind="arranger", format_version=ARRANGER_FORMAT_VERSION,
        model_config={"arranger": model.config.model_dump(mode="json"),
                      "z_chd_dim": arr.z_chd_dim, "z_txt_dim": arr.z_txt_dim},
        epoch=epoch, global_step=global_step, extra=extra,
    )


def load_arranger(path: str, device: str = "cpu") -> Tuple[ArrangerModel, Dict[str, Any]]:
    payload = load_checkpoint(path, kind="arranger", format_version=ARRANGER_FORMAT_VERSION,
                              map_location=device)
    cfg = payload["model_config"]
    try:
        model = ArrangerModel(ArrangerConfig(**cfg["arranger"]), cfg["z_chd_dim"], cfg["z_txt_dim"])
        model.load_state_dict(payload["state_dict"])
    except Exception as e:
        logger.error(f"Arranger checkpoint does not fit the model: {e}")
        raise CheckpointError(f"{path}: {e}") from e
    model.to(device).eval()
    return model, payload


def train_arranger(samples: Sequence[PairedSample], vae: ChordTextureVAE, config: ArrangerConfig,
                   output_dir: str, vae_checkpoint_id: str = "") -> ArrangerTrainResult:
    if not samples:
        logger.error("No paired samples to train the arranger on")
        raise EmptyCorpusError("No paired melody/accompaniment samples")
    units = config.units_per_sample
    samples = [s for s in samples if len(s.melody) == units and len(s.accompaniment) == units]
    if not samples:
        raise EmptyCorpusError(f"No paired sample has {units} units")

    os.makedirs(output_dir, exist_ok=True)
    torch.manual_seed(config.seed)
    device = torch.device(config.device)
    vae.eval()
    for p in vae.parameters():
        p.requires_grad_(False)

    z_chd, z_txt = encode_targets(samples, vae, config.chord_mode)
    pitch, rhythm = melody_tensors(samples)
    model = ArrangerModel(config, vae.config.z_chd_dim, vae.config.z_txt_dim).to(device)

    optimizer = torch.optim.Adam(model.parameters(), lr=config.lr, betas=(0.9, 0.98), eps=1e-9)
    scheduler = torch.optim.lr_scheduler.LambdaLR(
        optimizer, warmup_inverse_sqrt(config.warmup_steps, config.lr, config.lr_floor)
    )
    generator = torch.Generator()
    generator.manual_seed(config.seed)
    loader = DataLoader(TensorDataset(pitch, rhythm, z_chd, z_txt), batch_size=config.batch_size,
                        shuffle=True, generator=generator)

    metrics_path = os.path.join(output_dir, "arranger_metrics.jsonl")
    open(metrics_path, "w", encoding="utf-8").close()
    result = ArrangerTrainResult()
    step = 0
    for epoch in range(config.epochs):
        model.train()
        losses = []
        for batch_index, (b_pitch, b_rhythm, b_chd, b_txt) in enumerate(loader):
            loss = arranger_loss(model, b_pitch.to(device), b_rhythm.to(device), b_chd.to(device), b_txt.to(device))
            if not math.isfinite(float(loss.detach())):
                batch_id = f"epoch{epoch}-batch{batch_index}"
                logger.error(f"Arranger training diverged at {batch_id}")
                raise TrainingDivergenceError(batch_id, step, result.checkpoint)
            optimizer.zero_grad()
            loss.backward()
            if config.grad_clip > 0:
                torch.nn.utils.clip_grad_norm_(model.parameters(), config.grad_clip)
            optimizer.step()
            scheduler.step()
            with open(metrics_path, "a", encoding="utf-8") as f:
                f.write(json.dumps({"step": step, "epoch": epoch, "mse": float(loss),
                                    "lr": float(optimizer.param_groups[0]["lr"])}) + "\n")
            losses.append(float(loss))
            step += 1
        epoch_loss = sum(losses) / len(losses)
        result.epoch_losses.append(epoch_loss)
        logger.info(f"Arranger epoch {epoch + 1}/{config.epochs}: mse {epoch_loss:.5f}")

    result.global_step = step
    result.checkpoint = save_arranger(
        os.path.join(output_dir, "arranger.pt"), model, config.epochs, step,
        extra={"vae_checkpoint": vae_checkpoint_id, "sample_count": len(samples)},
    )
    return result
