# -*- coding: utf-8 -*-
"""
Eğitim testleri
---------------
1) Parça düzeyinde ayrım ve korpus dizini
2) Veri kümesi (12 transpozisyon)
3) Zamanlayıcılar
4) Eğitim döngüsü, checkpoint ve devam etme
"""

import json
import math
import os

import pytest
from pydantic import ValidationError

from chordtex.errors import DataError, EmptyCorpusError
from chordtex.evaluation import delta_sweep_perturb, write_reports_csv
from chordtex.model import ChordTextureVAE, load_vae
from chordtex.score import load_corpus
from chordtex.training import (
    CorpusIndex,
    KLAnnealer,
    SegmentDataset,
    TrainConfig,
    VAETrainer,
    build_corpus,
    exponential_gamma,
    preprocess_directory,
    split_songs,
    train,
    warmup_inverse_sqrt,
)


# ---------- 1) Ayrım ----------
def test_split_is_song_level_and_seeded():
    songs = [f"song{i:02d}" for i in range(10)]
    train_a, test_a = split_songs(songs, 0.9, seed=3)
    train_b, test_b = split_songs(list(reversed(songs)), 0.9, seed=3)
    assert (len(train_a), len(test_a)) == (9, 1)
    assert (train_a, test_a) == (train_b, test_b)
    assert not set(train_a) & set(test_a)


def test_split_needs_two_songs():
    with pytest.raises(EmptyCorpusError):
        split_songs(["only"], 0.9, 0)


def test_build_corpus_rejects_empty_input():
    with pytest.raises(EmptyCorpusError):
        build_corpus({"a": []}, TrainConfig())


def test_corpus_index_save_and_load(tmp_path, random_segments):
    corpus = {f"s{i}": random_segments(2, seed=i, song_id=f"s{i}") for i in range(4)}
    index = build_corpus(corpus, TrainConfig(split_fraction=0.75, seed=1))
    index.save(str(tmp_path))
    loaded = CorpusIndex.load(str(tmp_path))
    assert loaded == index
    assert len(loaded.test_keys()) == 2
    with pytest.raises(DataError):
        CorpusIndex.load(str(tmp_path / "missing"))


def test_preprocess_directory_skips_unsupported_meter(tmp_path, midi_dir):
    out = str(tmp_path / "corpus")
    result = preprocess_directory(midi_dir, out)
    assert result.skipped_songs == ["waltz"]
    assert sorted(result.segments_by_song) == [f"song{i}" for i in range(5)]
    assert [len(result.segments_by_song[f"song{i}"]) for i in range(5)] == [2, 2, 3, 3, 4]
    assert load_corpus(out) == result.segments_by_song


def test_preprocess_directory_without_midi(tmp_path):
    with pytest.raises(EmptyCorpusError):
        preprocess_directory(str(tmp_path), str(tmp_path / "out"))


# ---------- 2) Veri kümesi ----------
def test_training_keys_cover_twelve_transpositions(chord_segment):
    corpus = {"a": [chord_segment], "b": [chord_segment]}
    index = CorpusIndex(["a"], ["b"], {"a": 1, "b": 1})
    dataset = SegmentDataset(corpus, index.train_keys(), max_notes=4)
    assert len(dataset) == 12
    lowest = [min(n.pitch for n in dataset.segment(i).notes) for i in range(12)]
    assert lowest == [48 + k for k in range(12)]
    assert dataset[3]["id"] == "cadence@0+3"
    assert dataset[0]["chord"].shape == (36, 8)
    assert len(index.test_keys()) == 1


# ---------- 3) Zamanlayıcılar ----------
def test_kl_annealer_endpoints():
    annealer = KLAnnealer(0.1, warmup_steps=10)
    assert annealer(0) == 0.0
    assert annealer(9) == pytest.approx(0.1)
    assert annealer(500) == pytest.approx(0.1)
    assert annealer(3) == pytest.approx(0.1 * 3 / 9)


def test_exponential_gamma_reaches_the_floor():
    gamma = exponential_gamma(1e-3, 1e-5, 6)
    assert 1e-3 * gamma ** 5 == pytest.approx(1e-5)
    assert exponential_gamma(1e-3, 1e-5, 1) == 1.0


def test_warmup_inverse_sqrt_shape():
    factor = warmup_inverse_sqrt(10, 1e-3, 1e-5)
    assert factor(0) == pytest.approx(0.1)
    assert factor(9) == pytest.approx(1.0)
    assert factor(39) == pytest.approx(0.5)
    assert factor(10 ** 9) == pytest.approx(0.01)


def test_train_config_validation():
    with pytest.raises(ValidationError):
        TrainConfig(kl_target=0.5)
    with pytest.raises(ValidationError):
        TrainConfig(lr_start=1e-4, lr_floor=1e-3)
    with pytest.raises(ValidationError):
        TrainConfig(unknown_key=1)


# ---------- 4) Eğitim döngüsü ----------
@pytest.fixture
def small_corpus(random_segments):
    corpus = {f"s{i}": random_segments(2, seed=10 + i, song_id=f"s{i}") for i in range(3)}
    index = CorpusIndex(["s0", "s1"], ["s2"], {k: 2 for k in corpus}, shifts=[0, 7])
    return corpus, index


def _config(**kw) -> TrainConfig:
    base = dict(batch_size=4, epochs=2, lr_start=1e-3, lr_floor=1e-4, seed=5, log_every=1)
    base.update(kw)
    return TrainConfig(**base)


def _read_metrics(path):
    with open(path, "r", encoding="utf-8") as f:
        return [json.loads(line) for line in f]


def test_fit_writes_metrics_and_checkpoints(tmp_path, small_corpus, tiny_config):
    corpus, index = small_corpus
    result = train(corpus, index, _config(), str(tmp_path), tiny_config)
    assert len(result.epoch_losses) == 2
    assert all(math.isfinite(x) for x in result.epoch_losses + result.test_losses)
    assert os.path.exists(tmp_path / "epoch_1.pt")
    assert result.last_checkpoint.endswith("epoch_2.pt")
    assert os.path.exists(tmp_path / "best.pt")

    records = _read_metrics(tmp_path / "metrics.jsonl")
    assert len(records) == result.global_step == 4
    assert records[0]["kl_weight"] == 0.0
    assert records[1]["kl_weight"] == pytest.approx(0.1)
    assert {"step", "epoch", "lr", "chord_loss", "pianotree_loss", "kl_chd", "kl_txt", "total_loss"} <= set(records[0])
    assert records[-1]["lr"] == pytest.approx(1e-4)


def test_resume_reproduces_the_loss_sequence(tmp_path, small_corpus, tiny_config):
    corpus, index = small_corpus
    full_dir, part_dir = tmp_path / "full", tmp_path / "part"
    train(corpus, index, _config(), str(full_dir), tiny_config)

    first = train(corpus, index, _config(epochs=2, max_steps=2), str(part_dir), tiny_config)
    assert first.global_step == 2
    train(corpus, index, _config(), str(part_dir), tiny_config, resume_from=str(part_dir / "epoch_1.pt"))

    full = [r["total_loss"] for r in _read_metrics(full_dir / "metrics.jsonl")]
    resumed = [r["total_loss"] for r in _read_metrics(part_dir / "metrics.jsonl")]
    assert resumed == pytest.approx(full, rel=1e-4)


def test_trainer_needs_training_segments(tmp_path, chord_segment, tiny_config):
    index = CorpusIndex([], ["a"], {"a": 1})
    with pytest.raises(EmptyCorpusError):
        VAETrainer(ChordTextureVAE(tiny_config), {"a": [chord_segment]}, index, _config(), str(tmp_path))


def test_fresh_run_replaces_old_metrics(tmp_path, small_corpus, tiny_config):
    corpus, index = small_corpus
    train(corpus, index, _config(), str(tmp_path), tiny_config)
    first = _read_metrics(tmp_path / "metrics.jsonl")
    train(corpus, index, _config(), str(tmp_path), tiny_config)
    assert _read_metrics(tmp_path / "metrics.jsonl") == first


def test_same_seed_reproduces_split_metrics_and_reports(tmp_path, random_segments, tiny_config):
    corpus = {f"s{i}": random_segments(3, seed=i, song_id=f"s{i}") for i in range(5)}
    runs = []
    for name in ("a", "a", "b"):
        out = tmp_path / name
        index = build_corpus(corpus, TrainConfig(split_fraction=0.8, seed=11))
        result = train(corpus, index, _config(seed=11, epochs=1, batch_size=16), str(out), tiny_config)
        model, _ = load_vae(result.last_checkpoint)
        report = str(out / "deltas.csv")
        testset = [seg for song in index.test_songs for seg in corpus[song]]
        write_reports_csv(delta_sweep_perturb(model, testset, probabilities=[0.5]), report)
        with open(report, "rb") as f:
            runs.append(((index.train_songs, index.test_songs), _read_metrics(out / "metrics.jsonl"), f.read()))
    assert runs[0] == runs[1] == runs[2]


@pytest.mark.slow
def test_toy_training_lowers_the_epoch_loss(tmp_path, random_segments, tiny_config):
    corpus = {f"s{i:02d}": random_segments(50, seed=i, song_id=f"s{i:02d}") for i in range(40)}
    index = CorpusIndex([f"s{i:02d}" for i in range(36)], [f"s{i:02d}" for i in range(36, 40)],
                        {k: 50 for k in corpus}, shifts=[0, 5])
    config = _config(epochs=6, batch_size=64, lr_floor=1e-4, log_every=100)
    train(corpus, index, config, str(tmp_path), tiny_config)

    records = _read_metrics(tmp_path / "metrics.jsonl")
    per_epoch = [[r for r in records if r["epoch"] == e] for e in range(6)]
    means = [sum(r["total_loss"] for r in rows) / len(rows) for rows in per_epoch]
    drops = sum(later < earlier for earlier, later in zip(means, means[1:]))
    assert drops >= 4
    annealed = [r for r in records if r["epoch"] >= 1]
    assert all(math.isfinite(r["kl_chd"]) and r["kl_chd"] > 0 for r in annealed)
    assert all(math.isfinite(r["kl_txt"]) and r["kl_txt"] > 0 for r in annealed)
