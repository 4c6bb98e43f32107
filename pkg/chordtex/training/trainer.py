# -*- coding: utf-8 -*-
"""
VAE eğitim döngüsü
==================

- Adam, epoch başına geometrik lr azalması (lr_start -> lr_floor)
- KL ağırlığı ilk epoch boyunca 0 -> kl_target, sonra sabit
- Karıştırma ve örnekleme tohumları (seed, epoch) çiftinden türetilir; bu sayede
  epoch sınırından devam etmek aynı kayıp dizisini üretir
- Her adımda `metrics.jsonl` satırı (yeni koşu dosyayı sıfırlar, devam eden koşu
  checkpoint adımından itibaren yazar); her epoch sonunda checkpoint ve test
  kaybı en iyiyse `best.pt`
"""

import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

import torch
from torch.utils.data import DataLoader

from chordtex.errors import EmptyCorpusError, TrainingDivergenceError
from chordtex.model.batch import collate_examples
from chordtex.model.checkpoint import VAE_FORMAT_VERSION, load_checkpoint, save_vae
from chordtex.model.config import ModelConfig
from chordtex.model.vae import ChordTextureVAE, compute_loss
from chordtex.score.types import Segment
from chordtex.training.config import TrainConfig
from chordtex.training.corpus import CorpusIndex
from chordtex.training.dataset import SegmentDataset
from chordtex.training.schedules import KLAnnealer, exponential_gamma

logger = logging.getLogger(__name__)

METRICS_FILE = "metrics.jsonl"
BEST_CHECKPOINT = "best.pt"


def _epoch_seed(seed: int, epoch: int, stream: int) -> int:
    return (seed * 1_000_003 + epoch * 7_919 + stream) % (2 ** 63 - 1)


@dataclass
class TrainResult:
    epoch_losses: List[float] = field(default_factory=list)
    test_losses: List[float] = field(default_factory=list)
    last_checkpoint: Optional[str] = None
    best_checkpoint: Optional[str] = None
    global_step: int = 0


class VAETrainer:
    def __init__(self, model: ChordTextureVAE, segments_by_song: Mapping[str, Sequence[Segment]],
                 index: CorpusIndex, config: TrainConfig, output_dir: str) -> None:
        self.config = config
        self.device = torch.device(config.device)
        self.model = model.to(self.device)
        self.index = index
        self.output_dir = output_dir
        os.makedirs(output_dir, exist_ok=True)

        max_notes = model.config.max_notes
        self.train_set = SegmentDataset(segments_by_song, index.train_keys(), config.chord_mode, max_notes)
        self.test_set = SegmentDataset(segments_by_song, index.test_keys(), config.chord_mode, max_notes)
        if len(self.train_set) == 0:
            raise EmptyCorpusError("No training segments in corpus index")

        self.optimizer = torch.optim.Adam(self.model.parameters(), lr=config.lr_start)
        self.scheduler = torch.optim.lr_scheduler.ExponentialLR(
            self.optimizer, gamma=exponential_gamma(config.lr_start, config.lr_floor, config.epochs)
        )
        self.steps_per_epoch = math.ceil(len(self.train_set) / config.batch_size)
        self.annealer = KLAnnealer(config.kl_target, self.steps_per_epoch)

        self.epoch = 0
        self.global_step = 0
        self.best_test_loss = math.inf
        self.result = TrainResult()
        self.metrics_path = os.path.join(output_dir, METRICS_FILE)

    # ---------- Yardımcılar ----------
    def _loader(self, dataset: SegmentDataset, shuffle: bool, epoch: int) -> DataLoader:
        generator = torch.Generator()
        generator.manual_seed(_epoch_seed(self.config.seed, epoch, 0))
        return DataLoader(
            dataset, batch_size=self.config.batch_size, shuffle=shuffle, generator=generator,
            collate_fn=collate_examples, num_workers=self.config.num_workers,
        )

    def _reset_metrics(self) -> None:
        """Yeni koşuda dosya boşaltılır; devamda yalnızca checkpoint adımından önceki satırlar kalır."""
        kept: List[str] = []
        if self.global_step > 0 and os.path.exists(self.metrics_path):
            with open(self.metrics_path, "r", encoding="utf-8") as f:
                kept = [line for line in f if line.strip() and json.loads(line)["step"] < self.global_step]
        with open(self.metrics_path, "w", encoding="utf-8") as f:
            f.writelines(kept)

    def _write_metrics(self, record: Dict[str, float]) -> None:
        with open(self.metrics_path, "a", encoding="utf-8") as f:
            f.write(json.dumps(record) + "\n")

    def _current_lr(self) -> float:
        return float(self.optimizer.param_groups[0]["lr"])

    def _budget_left(self) -> bool:
        return self.config.max_steps is None or self.global_step < self.config.max_steps

    # ---------- Eğitim ----------
    def train_epoch(self, epoch: int) -> float:
        self.model.train()
        sampler = torch.Generator()
        sampler.manual_seed(_epoch_seed(self.config.seed, epoch, 1))
        totals: List[float] = []

        for batch_index, batch in enumerate(self._loader(self.train_set, True, epoch)):
            if not self._budget_left():
                break
            batch = batch.to(self.device)
            kl_weight = self.annealer(self.global_step)
            batch_id = f"epoch{epoch}-batch{batch_index}"
            try:
                losses = compute_loss(self.model, batch, kl_weight, sampler, batch_id)
            except TrainingDivergenceError as e:
                logger.error(f"Training diverged at {batch_id}; last good checkpoint: {self.result.last_checkpoint}")
                raise TrainingDivergenceError(batch_id, self.global_step, self.result.last_checkpoint) from e

            self.optimizer.zero_grad()
            losses.total.backward()
            if self.config.grad_clip > 0:
                torch.nn.utils.clip_grad_norm_(self.model.parameters(), self.config.grad_clip)
            self.optimizer.step()

            record = {"step": self.global_step, "epoch": epoch, **losses.as_dict(),
                      "lr": self._current_lr(), "kl_weight": kl_weight}
            self._write_metrics(record)
            totals.append(record["total_loss"])
            if self.global_step % self.config.log_every == 0:
                logger.info(f"epoch {epoch} step {self.global_step}: total {record['total_loss']:.4f} "
                            f"chord {record['chord_loss']:.4f} tree {record['pianotree_loss']:.4f} "
                            f"kl_chd {record['kl_chd']:.3f} kl_txt {record['kl_txt']:.3f} beta {kl_weight:.4f}")
            self.global_step += 1

        return sum(totals) / len(totals) if totals else math.nan

    @torch.no_grad()
    def evaluate(self) -> float:
        """Test kaybı (kl_target ağırlıkla, sabit tohumlu örnekleme)."""
        if len(self.test_set) == 0:
            return math.nan
        self.model.eval()
        sampler = torch.Generator()
        sampler.manual_seed(_epoch_seed(self.config.seed, 0, 2))
        total, count = 0.0, 0
        for batch in self._loader(self.test_set, False, 0):
            batch = batch.to(self.device)
            losses = compute_loss(self.model, batch, self.config.kl_target, sampler, "test")
            total += float(losses.total) * len(batch)
            count += len(batch)
        return total / count

    def _save(self, filename: str) -> str:
        return save_vae(
            os.path.join(self.output_dir, filename), self.model,
            train_config=self.config.model_dump(mode="json"), epoch=self.epoch, global_step=self.global_step,
            optimizer=self.optimizer, scheduler=self.scheduler,
            extra={"best_test_loss": self.best_test_loss, "train_songs": self.index.train_songs,
                   "test_songs": self.index.test_songs},
        )

    def resume(self, path: str) -> None:
        """Epoch sınırında kaydedilmiş checkpoint'ten devam."""
        payload = load_checkpoint(path, kind="vae", format_version=VAE_FORMAT_VERSION,
                                  map_location=str(self.device))
        self.model.load_state_dict(payload["state_dict"])
        if payload.get("optimizer"):
            self.optimizer.load_state_dict(payload["optimizer"])
        if payload.get("scheduler"):
            self.scheduler.load_state_dict(payload["scheduler"])
        self.epoch = int(payload["epoch"])
        self.global_step = int(payload["global_step"])
        self.best_test_loss = float(payload.get("extra", {}).get("best_test_loss", math.inf))
        self.result.last_checkpoint = path
        logger.info(f"Resumed from {path} at epoch {self.epoch}, step {self.global_step}")

    def fit(self) -> TrainResult:
        logger.info(f"Training on {len(self.train_set)} segments ({self.steps_per_epoch} steps/epoch), "
                    f"testing on {len(self.test_set)}")
        self._reset_metrics()
        while self.epoch < self.config.epochs and self._budget_left():
            epoch = self.epoch
            train_loss = self.train_epoch(epoch)
            test_loss = self.evaluate()
            self.scheduler.step()
            self.epoch = epoch + 1
            self.result.epoch_losses.append(train_loss)
            self.result.test_losses.append(test_loss)

            is_best = not math.isnan(test_loss) and test_loss < self.best_test_loss
            if is_best:
                self.best_test_loss = test_loss
            self.result.last_checkpoint = self._save(f"epoch_{self.epoch}.pt")
            if is_best:
                self.result.best_checkpoint = self._save(BEST_CHECKPOINT)
            logger.info(f"Epoch {self.epoch}/{self.config.epochs}: train {train_loss:.4f}, test {test_loss:.4f}, "
                        f"lr {self._current_lr():.2e}")

        self.result.global_step = self.global_step
        return self.result


def train(segments_by_song: Mapping[str, Sequence[Segment]], index: CorpusIndex, config: TrainConfig,
          output_dir: str, model_config: Optional[ModelConfig] = None,
          resume_from: Optional[str] = None) -> TrainResult:
    torch.manual_seed(config.seed)
    model = ChordTextureVAE(model_config or ModelConfig())
    trainer = VAETrainer(model, segments_by_song, index, config, output_dir)
    if resume_from:
        trainer.resume(resume_from)
    return trainer.fit()
