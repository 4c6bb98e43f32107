# -*- coding: utf-8 -*-
"""
Checkpoint kaydı / yüklemesi
============================

`torch.save` ile sözlük: format_version, kind, state_dict, shapes,
model_config, train_config, epoch, global_step, optimizer/scheduler durumu.
Yüklemede tür, sürüm ve parametre şekilleri doğrulanır; sorun varsa
CheckpointError yükseltilir.
"""

import hashlib
import logging
import os
from typing import Any, Dict, Optional, Tuple

import torch

from chordtex.errors import CheckpointError
from chordtex.model.config import ModelConfig
from chordtex.model.vae import ChordTextureVAE

logger = logging.getLogger(__name__)

VAE_FORMAT_VERSION = 1


def checkpoint_id(path: str) -> str:
    """Dosya içeriğinin sha256 özetinin ilk 12 hanesi."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()[:12]


def save_checkpoint(path: str, model: torch.nn.Module, *, kind: str, format_version: int,
                    model_config: Dict[str, Any], train_config: Optional[Dict[str, Any]] = None,
                    epoch: int = 0, global_step: int = 0, optimizer: Optional[torch.optim.Optimizer] = None,
                    scheduler: Optional[Any] = None, extra: Optional[Dict[str, Any]] = None) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    state = {k: v.detach().cpu() for k, v in model.state_dict().items()}
    payload = {
        "format_version": format_version,
        "kind": kind,
        "state_dict": state,
        "shapes": {k: list(v.shape) for k, v in state.items()},
        "model_config": model_config,
        "train_config": train_config or {},
        "epoch": epoch,
        "global_step": global_step,
        "optimizer": optimizer.state_dict() if optimizer is not None else None,
        "scheduler": scheduler.state_dict() if scheduler is not None else None,
        "extra": extra or {},
    }
    tmp = path + ".tmp"
    torch.save(payload, tmp)
    os.replace(tmp, path)
    logger.info(f"Checkpoint saved: {path} (epoch {epoch}, step {global_step})")
    return path


def load_checkpoint(path: str, *, kind: str, format_version: int,
                    map_location: str = "cpu") -> Dict[str, Any]:
    if not os.path.exists(path):
        logger.error(f"Checkpoint not found: {path}")
        raise CheckpointError(f"Checkpoint not found: {path}")
    try:
        payload = torch.load(path, map_location=map_location, weights_only=True)
    except Exception as e:
        logger.error(f"Checkpoint load failed: {e}")
        raise CheckpointError(f"Cannot read checkpoint {path}: {e}") from e

    if not isinstance(payload, dict) or "state_dict" not in payload:
        raise CheckpointError(f"{path} is not a chordtex checkpoint")
    if payload.get("kind") != kind:
        raise CheckpointError(f"{path} holds a '{payload.get('kind')}' checkpoint, expected '{kind}'")
    if payload.get("format_version") != format_version:
        raise CheckpointError(
            f"{path} has format version {payload.get('format_version')}, expected {format_version}"
        )
    shapes = payload.get("shapes", {})
    for name, tensor in payload["state_dict"].items():
        if list(tensor.shape) != list(shapes.get(name, tensor.shape)):
            raise CheckpointError(f"{path}: parameter {name} does not match its recorded shape")
    return payload


def save_vae(path: str, model: ChordTextureVAE, **kwargs) -> str:
    return save_checkpoint(path, model, kind="vae", format_version=VAE_FORMAT_VERSION,
                           model_config=model.config.model_dump(), **kwargs)


def load_vae(path: str, device: str = "cpu") -> Tuple[ChordTextureVAE, Dict[str, Any]]:
    """VAE'yi checkpoint'ten kurar; (model, payload) döndürür. Model eval modundadır."""
    payload = load_checkpoint(path, kind="vae", format_version=VAE_FORMAT_VERSION, map_location=device)
    try:
        model = ChordTextureVAE(ModelConfig(**payload["model_config"]))
        model.load_state_dict(payload["state_dict"])
    except Exception as e:
        logger.error(f"Checkpoint does not fit the model: {e}")
        raise CheckpointError(f"{path}: {e}") from e
    model.to(device).eval()
    logger.info(f"VAE loaded from {path} (epoch {payload.get('epoch')})")
    return model, payload
