# -*- coding: utf-8 -*-
"""
Komut satırı arayüzü
====================

    chordtex [--config PATH] [-v] KOMUT [SEÇENEKLER]

Komutlar: preprocess, train, train-arranger, transfer, vary, sample, arrange,
evaluate, export. Her komut çıktı dizinine `manifest.json` yazar.

Çıkış kodları: 0 başarılı, 1 kullanım, 2 veri, 3 sayısal hata, 4 yapılandırma.

Not: 2/4 ölçülü parçalarda 8 vuruşluk birim 4 ölçüye karşılık gelir.
"""

import json
import logging
import os
import sys
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence

import click
import numpy as np
import pandas as pd
import torch
from pydantic import BaseModel, Field

from chordtex import __version__
from chordtex.arranger import arrange, build_paired_samples, load_arranger, train_arranger
from chordtex.chords import (
    ChordProgression,
    extract_progression,
    progression_label,
    progressions_from_labels,
    read_label_file,
    split_label_string,
)
from chordtex.config import AppConfig, load_config
from chordtex.control import split_into_units, style_transfer, transfer_from_pool, vary_texture_posterior, vary_texture_prior
from chordtex.errors import ChordTexError, DataError, EmptyTestSetError, UsageError
from chordtex.evaluation import (
    chord_agreement,
    delta_sweep_perturb,
    delta_sweep_transpose,
    overall_root_accuracy,
    plot_deltas,
    reconstruction_report,
    write_agreement_csv,
    write_reports_csv,
)
from chordtex.model import checkpoint_id, load_vae
from chordtex.score import Segment, load_corpus, load_midi, write_midi
from chordtex.training import CorpusIndex, build_corpus, preprocess_directory, train
from chordtex.training.corpus import find_midi_files

logger = logging.getLogger("chordtex")

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
MANIFEST_FILE = "manifest.json"
AGREEMENT_FILE = "chord_agreement.csv"


# ---------- Manifest ----------
class RunManifest(BaseModel):
    command: str
    config: Dict[str, Any]
    seed: Optional[int] = None
    inputs: Dict[str, Any] = Field(default_factory=dict)
    outputs: List[str] = Field(default_factory=list)
    checkpoint_ids: Dict[str, str] = Field(default_factory=dict)
    tool_version: str = __version__
    timestamp: str = Field(default_factory=lambda: datetime.now().strftime("%Y-%m-%d %H:%M:%S"))


def write_manifest(output_dir: str, manifest: RunManifest) -> str:
    os.makedirs(output_dir, exist_ok=True)
    path = os.path.join(output_dir, MANIFEST_FILE)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest.model_dump(mode="json"), f, indent=2, ensure_ascii=False)
    return path


# ---------- Yardımcılar ----------
def setup_logging(verbose: bool = False) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, format=LOG_FORMAT, force=True)


def seed_everything(seed: int) -> torch.Generator:
    np.random.seed(seed)
    torch.manual_seed(seed)
    generator = torch.Generator()
    generator.manual_seed(seed)
    return generator


def _config(ctx: click.Context) -> AppConfig:
    return ctx.obj["config"]


def _units(path: str, offset_beats: int, tracks: Optional[Sequence[str]] = None) -> List[Segment]:
    units = split_into_units(load_midi(path), offset_beats, tracks or None)
    if not units:
        raise DataError(f"{path} yields no 8-beat units (meter must be 2/4 or 4/4)")
    return units


def _progressions(chords: Optional[str], chord_file: Optional[str], beats_per_symbol: int):
    if chords and chord_file:
        raise UsageError("Use either --chords or --chord-file, not both")
    if chord_file:
        return progressions_from_labels(read_label_file(chord_file), 1)
    if chords:
        return progressions_from_labels(split_label_string(chords), beats_per_symbol)
    return None


def _write_units(segments: Sequence[Segment], path: str, qpm: float) -> str:
    return write_midi(list(segments), path, qpm)


def _test_segments(corpus: Optional[str], test_dir: Optional[str], cfg: AppConfig) -> List[Segment]:
    if test_dir:
        segments: List[Segment] = []
        for path in find_midi_files(test_dir):
            try:
                segments.extend(split_into_units(load_midi(path), cfg.data.start_beat, cfg.data.tracks))
            except DataError as e:
                logger.warning(f"Skipping {path}: {e}")
        return segments
    corpus = corpus or cfg.data.corpus_path()
    index = CorpusIndex.load(corpus)
    by_song = load_corpus(corpus, index.test_songs)
    return [seg for song in index.test_songs for seg in by_song[song]]


# ---------- Komut grubu ----------
@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="YAML config file (see config.example.yaml).")
@click.option("--verbose", "-v", is_flag=True, help="Enable debug logging.")
@click.version_option(__version__, prog_name="chordtex")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], verbose: bool) -> None:
    """Chord / texture disentangled piano generation."""
    setup_logging(verbose)
    ctx.ensure_object(dict)
    ctx.obj["config"] = load_config(config_path)


@cli.command()
@click.option("--input", "input_dir", required=True, type=click.Path(file_okay=False), help="Directory of MIDI files.")
@click.option("--output", "output_dir", default=None, type=click.Path(file_okay=False),
              help="Corpus directory (default: data.root/data.corpus_dir).")
@click.option("--hop", "hop_beats", default=None, type=int, help="Beats between window starts.")
@click.option("--start-beat", default=None, type=int, help="Beat offset of the first window.")
@click.option("--track", "tracks", multiple=True, help="Track name to merge (repeatable; default all).")
@click.option("--seed", default=None, type=int, help="Seed of the song-level split.")
@click.option("--split", "split_fraction", default=None, type=float, help="Training fraction of songs.")
@click.pass_context
def preprocess(ctx, input_dir, output_dir, hop_beats, start_beat, tracks, seed, split_fraction):
    """Segment a MIDI directory into a corpus and split it by song."""
    cfg = _config(ctx)
    output_dir = output_dir or cfg.data.corpus_path()
    hop = hop_beats or cfg.data.hop_beats
    train_cfg = cfg.train.model_copy(update={k: v for k, v in {
        "seed": seed, "split_fraction": split_fraction, "hop_beats": hop}.items() if v is not None})
    result = preprocess_directory(input_dir, output_dir, hop,
                                  cfg.data.start_beat if start_beat is None else start_beat,
                                  list(tracks) or cfg.data.tracks)
    index = build_corpus(result.segments_by_song, train_cfg)
    index_path = index.save(output_dir)
    click.echo(f"{result.segment_count} segments from {len(result.segments_by_song)} songs "
               f"({result.skip_count} skipped) -> {output_dir}")
    write_manifest(output_dir, RunManifest(
        command="preprocess", config=cfg.model_dump(mode="json"), seed=train_cfg.seed,
        inputs={"input": input_dir, "skipped_songs": result.skipped_songs}, outputs=[index_path],
    ))


@cli.command("train")
@click.option("--corpus", default=None, type=click.Path(file_okay=False), help="Corpus directory from preprocess.")
@click.option("--output", "output_dir", required=True, type=click.Path(file_okay=False), help="Run directory.")
@click.option("--epochs", default=None, type=int, help="Number of epochs.")
@click.option("--batch-size", default=None, type=int, help="Batch size.")
@click.option("--seed", default=None, type=int, help="Training seed.")
@click.option("--max-steps", default=None, type=int, help="Stop after this many optimizer steps.")
@click.option("--resume", default=None, type=click.Path(dir_okay=False), help="Epoch checkpoint to resume from.")
@click.pass_context
def train_command(ctx, corpus, output_dir, epochs, batch_size, seed, max_steps, resume):
    """Train the chord/texture VAE."""
    cfg = _config(ctx)
    corpus = corpus or cfg.data.corpus_path()
    train_cfg = cfg.train.model_copy(update={k: v for k, v in {
        "epochs": epochs, "batch_size": batch_size, "seed": seed, "max_steps": max_steps}.items() if v is not None})
    index = CorpusIndex.load(corpus)
    segments = load_corpus(corpus, index.train_songs + index.test_songs)
    result = train(segments, index, train_cfg, output_dir, cfg.model, resume)
    outputs = [p for p in (result.last_checkpoint, result.best_checkpoint) if p]
    click.echo(f"Trained {len(result.epoch_losses)} epochs; last checkpoint {result.last_checkpoint}")
    write_manifest(output_dir, RunManifest(
        command="train", config={**cfg.model_dump(mode="json"), "train": train_cfg.model_dump(mode="json")},
        seed=train_cfg.seed, inputs={"corpus": corpus, "resume": resume}, outputs=outputs,
        checkpoint_ids={os.path.basename(p): checkpoint_id(p) for p in outputs},
    ))


@cli.command("train-arranger")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(dir_okay=False),
              help="CSV: song_id,path,melody_track,accompaniment_tracks.")
@click.option("--vae", "vae_path", required=True, type=click.Path(dir_okay=False), help="Trained VAE checkpoint.")
@click.option("--output", "output_dir", required=True, type=click.Path(file_okay=False), help="Run directory.")
@click.option("--epochs", default=None, type=int, help="Number of epochs.")
@click.option("--seed", default=None, type=int, help="Training seed.")
@click.pass_context
def train_arranger_command(ctx, manifest_path, vae_path, output_dir, epochs, seed):
    """Train the melody-to-accompaniment latent Transformer."""
    cfg = _config(ctx)
    arr_cfg = cfg.arranger.model_copy(update={k: v for k, v in {"epochs": epochs, "seed": seed}.items()
                                              if v is not None})
    corpus = build_paired_samples(manifest_path, arr_cfg.units_per_sample, cfg.data.start_beat)
    vae, _ = load_vae(vae_path, arr_cfg.device)
    vae_id = checkpoint_id(vae_path)
    result = train_arranger(corpus.samples, vae, arr_cfg, output_dir, vae_id)
    click.echo(f"Arranger trained on {len(corpus.samples)} samples ({corpus.skip_count} songs skipped)")
    write_manifest(output_dir, RunManifest(
        command="train-arranger", config={**cfg.model_dump(mode="json"), "arranger": arr_cfg.model_dump(mode="json")},
        seed=arr_cfg.seed, inputs={"manifest": manifest_path, "vae": vae_path, "skipped_songs": corpus.skipped},
        outputs=[result.checkpoint], checkpoint_ids={"vae": vae_id, "arranger": checkpoint_id(result.checkpoint)},
    ))


@cli.command()
@click.option("--a", "a_path", required=True, type=click.Path(dir_okay=False), help="First piece (MIDI).")
@click.option("--b", "b_path", required=True, type=click.Path(dir_okay=False), help="Second piece (MIDI).")
@click.option("--vae", "vae_path", required=True, type=click.Path(dir_okay=False), help="Trained VAE checkpoint.")
@click.option("--output", "output_dir", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--offset-beats", default=None, type=int, help="Beat offset of the first 8-beat unit.")
@click.pass_context
def transfer(ctx, a_path, b_path, vae_path, output_dir, offset_beats):
    """Swap chord and texture latents between two pieces, unit by unit."""
    cfg = _config(ctx)
    offset = cfg.generation.offset_beats if offset_beats is None else offset_beats
    units_a = _units(a_path, offset, cfg.data.tracks)
    units_b = _units(b_path, offset, cfg.data.tracks)
    if len(units_a) != len(units_b):
        common = min(len(units_a), len(units_b))
        logger.warning(f"Pieces have {len(units_a)} and {len(units_b)} units; using the first {common}")
        units_a, units_b = units_a[:common], units_b[:common]
    vae, _ = load_vae(vae_path, cfg.train.device)
    os.makedirs(output_dir, exist_ok=True)
    mode = cfg.evaluation.chord_mode
    out_a_chords = _write_units(style_transfer(units_b, units_a, vae, mode),
                                os.path.join(output_dir, "a_chords_b_texture.mid"), cfg.generation.qpm)
    out_b_chords = _write_units(style_transfer(units_a, units_b, vae, mode),
                                os.path.join(output_dir, "b_chords_a_texture.mid"), cfg.generation.qpm)
    click.echo(f"Wrote {out_a_chords} and {out_b_chords}")
    write_manifest(output_dir, RunManifest(
        command="transfer", config=cfg.model_dump(mode="json"),
        inputs={"a": a_path, "b": b_path, "offset_beats": offset, "units": len(units_a)},
        outputs=[out_a_chords, out_b_chords], checkpoint_ids={"vae": checkpoint_id(vae_path)},
    ))


@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False), help="Source piece (MIDI).")
@click.option("--vae", "vae_path", required=True, type=click.Path(dir_okay=False), help="Trained VAE checkpoint.")
@click.option("--output", "output_dir", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--unit", "unit_index", default=0, type=int, help="Index of the 8-beat unit to vary.")
@click.option("--n", default=None, type=int, help="Number of variations.")
@click.option("--seed", default=None, type=int, help="Sampling seed.")
@click.option("--pool", "pool_dir", default=None, type=click.Path(file_okay=False),
              help="Corpus directory; take textures from random pool segments instead of the posterior.")
@click.pass_context
def vary(ctx, input_path, vae_path, output_dir, unit_index, n, seed, pool_dir):
    """Texture variations of one unit with its chords kept."""
    cfg = _config(ctx)
    n = cfg.generation.n if n is None else n
    seed = cfg.generation.seed if seed is None else seed
    units = _units(input_path, cfg.generation.offset_beats, cfg.data.tracks)
    if not 0 <= unit_index < len(units):
        raise UsageError(f"--unit must be in [0, {len(units) - 1}]")
    generator = seed_everything(seed)
    vae, _ = load_vae(vae_path, cfg.train.device)
    x = units[unit_index]
    if pool_dir:
        pool = [s for segs in load_corpus(pool_dir).values() for s in segs]
        outputs = transfer_from_pool(x, pool, vae, np.random.default_rng(seed), n, cfg.evaluation.chord_mode)
    else:
        outputs = vary_texture_posterior(x, vae, generator, n, cfg.evaluation.chord_mode)
    os.makedirs(output_dir, exist_ok=True)
    paths = [write_midi(seg, os.path.join(output_dir, f"variation_{k:02d}.mid"), cfg.generation.qpm)
             for k, seg in enumerate(outputs)]
    click.echo(f"Wrote {len(paths)} variations to {output_dir}")
    write_manifest(output_dir, RunManifest(
        command="vary", config=cfg.model_dump(mode="json"), seed=seed,
        inputs={"input": input_path, "unit": unit_index, "n": n, "pool": pool_dir},
        outputs=paths, checkpoint_ids={"vae": checkpoint_id(vae_path)},
    ))


@cli.command()
@click.option("--chords", default=None, help='Chord symbols, e.g. "C Am F G".')
@click.option("--chord-file", default=None, type=click.Path(dir_okay=False),
              help="Label file with one symbol per beat.")
@click.option("--beats-per-symbol", default=None, type=int, help="Beats covered by each --chords symbol.")
@click.option("--vae", "vae_path", required=True, type=click.Path(dir_okay=False), help="Trained VAE checkpoint.")
@click.option("--output", "output_dir", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--n", default=None, type=int, help="Number of samples.")
@click.option("--seed", default=None, type=int, help="Sampling seed.")
@click.pass_context
def sample(ctx, chords, chord_file, beats_per_symbol, vae_path, output_dir, n, seed):
    """Sample textures from the prior under a given chord progression."""
    cfg = _config(ctx)
    n = cfg.generation.n if n is None else n
    seed = cfg.generation.seed if seed is None else seed
    progressions = _progressions(chords, chord_file, beats_per_symbol or cfg.generation.beats_per_symbol)
    if not progressions:
        raise UsageError("Pass --chords or --chord-file")
    generator = seed_everything(seed)
    vae, _ = load_vae(vae_path, cfg.train.device)
    # her birim bağımsız örneklenir
    per_unit = [vary_texture_prior(prog, vae, generator, n, "sample", 8 * u) for u, prog in enumerate(progressions)]
    os.makedirs(output_dir, exist_ok=True)
    paths = [_write_units([variants[k] for variants in per_unit],
                          os.path.join(output_dir, f"sample_{k:02d}.mid"), cfg.generation.qpm)
             for k in range(n)]
    agreement = [row for k in range(n)
                 for row in chord_agreement([variants[k] for variants in per_unit], progressions, "sample", k)]
    agreement_path = os.path.join(output_dir, AGREEMENT_FILE)
    write_agreement_csv(agreement, agreement_path)
    click.echo(f"Wrote {n} samples over {' | '.join(progression_label(p) for p in progressions)}; "
               f"root accuracy {overall_root_accuracy(agreement):.3f}")
    write_manifest(output_dir, RunManifest(
        command="sample", config=cfg.model_dump(mode="json"), seed=seed,
        inputs={"chords": chords, "chord_file": chord_file, "n": n,
                "root_accuracy": overall_root_accuracy(agreement)},
        outputs=paths + [agreement_path],
        checkpoint_ids={"vae": checkpoint_id(vae_path)},
    ))


@cli.command("arrange")
@click.option("--melody", "melody_path", required=True, type=click.Path(dir_okay=False), help="Melody MIDI.")
@click.option("--melody-track", default=None, help="Track holding the melody (default: all tracks).")
@click.option("--arranger", "arranger_path", required=True, type=click.Path(dir_okay=False),
              help="Arranger checkpoint.")
@click.option("--vae", "vae_path", required=True, type=click.Path(dir_okay=False), help="Trained VAE checkpoint.")
@click.option("--output", "output_dir", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--chords", default=None, help="Chord symbols to force, one per --beats-per-symbol beats.")
@click.option("--chord-file", default=None, type=click.Path(dir_okay=False), help="Label file to force chords.")
@click.option("--beats-per-symbol", default=None, type=int, help="Beats covered by each --chords symbol.")
@click.option("--prefix", "prefix_path", default=None, type=click.Path(dir_okay=False),
              help="Accompaniment MIDI whose first units are kept.")
@click.option("--prefix-track", "prefix_tracks", multiple=True, help="Accompaniment track of --prefix (repeatable).")
@click.option("--prefix-units", default=1, type=int, help="Number of prefix units to keep.")
@click.pass_context
def arrange_command(ctx, melody_path, melody_track, arranger_path, vae_path, output_dir, chords, chord_file,
                    beats_per_symbol, prefix_path, prefix_tracks, prefix_units):
    """Arrange an accompaniment for a melody."""
    cfg = _config(ctx)
    melody = _units(melody_path, cfg.generation.offset_beats, [melody_track] if melody_track else None)
    progressions = _progressions(chords, chord_file, beats_per_symbol or cfg.generation.beats_per_symbol)
    prefix = None
    if prefix_path:
        prefix = _units(prefix_path, cfg.generation.offset_beats, list(prefix_tracks) or None)[:prefix_units]

    vae, _ = load_vae(vae_path, cfg.train.device)
    model, _ = load_arranger(arranger_path, cfg.arranger.device)
    window = model.config.units_per_sample
    arranged: List[Segment] = []
    forced: List[ChordProgression] = []
    for start in range(0, len(melody), window):
        units = melody[start:start + window]
        given = None
        if progressions is not None:
            given = progressions[start:start + len(units)]
            if len(given) < len(units):
                given = list(given) + [given[-1] if given else progressions[-1]] * (len(units) - len(given))
            forced.extend(given)
        arranged.extend(arrange(units, model, vae, given, prefix if start == 0 else None,
                                cfg.arranger.chord_mode))

    os.makedirs(output_dir, exist_ok=True)
    out = write_midi({"MELODY": melody, "PIANO": arranged}, os.path.join(output_dir, "arrangement.mid"),
                     cfg.generation.qpm)
    chord_text = " | ".join(progression_label(extract_progression(s)) for s in arranged)
    click.echo(f"Wrote {out}; chords: {chord_text}")
    outputs, root_accuracy = [out], None
    if forced:
        agreement = chord_agreement(arranged, forced, "arrange")
        root_accuracy = overall_root_accuracy(agreement)
        outputs.append(os.path.join(output_dir, AGREEMENT_FILE))
        write_agreement_csv(agreement, outputs[-1])
        click.echo(f"Forced chord root accuracy {root_accuracy:.3f}")
    write_manifest(output_dir, RunManifest(
        command="arrange", config=cfg.model_dump(mode="json"),
        inputs={"melody": melody_path, "melody_track": melody_track, "chords": chords, "chord_file": chord_file,
                "prefix": prefix_path, "prefix_units": prefix_units if prefix_path else 0,
                "root_accuracy": root_accuracy},
        outputs=outputs, checkpoint_ids={"vae": checkpoint_id(vae_path), "arranger": checkpoint_id(arranger_path)},
    ))


@cli.command()
@click.option("--vae", "vae_path", required=True, type=click.Path(dir_okay=False), help="Trained VAE checkpoint.")
@click.option("--corpus", default=None, type=click.Path(file_okay=False), help="Corpus directory (test songs).")
@click.option("--test-dir", default=None, type=click.Path(file_okay=False), help="Directory of test MIDI files.")
@click.option("--sweep", type=click.Choice(["transpose", "perturb", "reconstruction", "all"]), default="all",
              help="Which measurement to run.")
@click.option("--output", "output_dir", required=True, type=click.Path(file_okay=False), help="Report directory.")
@click.pass_context
def evaluate(ctx, vae_path, corpus, test_dir, sweep, output_dir):
    """Disentanglement sweeps and reconstruction metrics as CSV."""
    cfg = _config(ctx)
    ev = cfg.evaluation
    testset = _test_segments(corpus, test_dir, cfg)
    if not testset:
        raise EmptyTestSetError("empty test set")
    vae, _ = load_vae(vae_path, cfg.train.device)
    os.makedirs(output_dir, exist_ok=True)
    outputs: List[str] = []
    reports = []
    if sweep in ("transpose", "all"):
        transposed = delta_sweep_transpose(vae, testset, ev.chord_mode, ev.shifts)
        write_reports_csv(transposed, os.path.join(output_dir, "deltas_transpose.csv"))
        outputs.append(os.path.join(output_dir, "deltas_transpose.csv"))
        reports.extend(transposed)
    if sweep in ("perturb", "all"):
        perturbed = delta_sweep_perturb(vae, testset, ev.probabilities, ev.base_seed, ev.chord_mode)
        write_reports_csv(perturbed, os.path.join(output_dir, "deltas_perturb.csv"))
        outputs.append(os.path.join(output_dir, "deltas_perturb.csv"))
        reports.extend(perturbed)
    if sweep in ("reconstruction", "all"):
        rec = reconstruction_report(vae, testset, ev.chord_mode)
        path = os.path.join(output_dir, "reconstruction.csv")
        pd.DataFrame([rec.model_dump()]).to_csv(path, index=False, encoding="utf-8")
        outputs.append(path)
    if reports and ev.plot:
        outputs.append(plot_deltas(reports, os.path.join(output_dir, "deltas.png")))
    click.echo(f"Evaluated {len(testset)} segments -> {output_dir}")
    write_manifest(output_dir, RunManifest(
        command="evaluate", config=cfg.model_dump(mode="json"), seed=ev.base_seed,
        inputs={"corpus": corpus, "test_dir": test_dir, "sweep": sweep, "segments": len(testset)},
        outputs=outputs, checkpoint_ids={"vae": checkpoint_id(vae_path)},
    ))


@cli.command()
@click.option("--corpus", default=None, type=click.Path(file_okay=False), help="Corpus directory.")
@click.option("--output", "output_dir", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--song", "songs", multiple=True, help="Song id to export (repeatable; default all).")
@click.pass_context
def export(ctx, corpus, output_dir, songs):
    """Write stored corpus segments back to MIDI (segments placed back to back)."""
    cfg = _config(ctx)
    corpus = corpus or cfg.data.corpus_path()
    by_song = load_corpus(corpus, list(songs) or None)
    os.makedirs(output_dir, exist_ok=True)
    paths = [write_midi(segs, os.path.join(output_dir, f"{song}.mid"), cfg.generation.qpm)
             for song, segs in by_song.items()]
    click.echo(f"Exported {len(paths)} songs to {output_dir}")
    write_manifest(output_dir, RunManifest(
        command="export", config=cfg.model_dump(mode="json"), inputs={"corpus": corpus}, outputs=paths,
    ))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Giriş noktası; alan hatalarını çıkış kodlarına çevirir."""
    try:
        cli.main(args=list(argv) if argv is not None else None, prog_name="chordtex", standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        click.echo("Aborted.", err=True)
        return UsageError.exit_code
    except click.ClickException as e:
        e.show()
        return UsageError.exit_code
    except ChordTexError as e:
        logger.error(str(e))
        click.echo(f"Error: {e}", err=True)
        click.echo(f"Remedy: {e.remedy}", err=True)
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected {type(e).__name__}: {e}")
        click.echo(f"Error: {type(e).__name__}: {e}", err=True)
        click.echo(f"Remedy: {DataError.remedy}", err=True)
        return DataError.exit_code


if __name__ == "__main__":
    sys.exit(main())
