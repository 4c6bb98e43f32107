# -*- coding: utf-8 -*-
"""
Model testleri
--------------
1) PianoTree hedef kodlaması
2) Kodlayıcı şekilleri ve konvolüsyon kayma özelliği
3) Kayıp fonksiyonları (analitik değerler, gradyan kontrolü)
4) Açgözlü çözüm ve checkpoint
5) Küçük veri üzerinde ezberleme (slow)
"""

import math

import numpy as np
import pytest
import torch
from torch import nn
from torch.func import functional_call

from chordtex.errors import (
    CheckpointError,
    MalformedChordMatrixError,
    MalformedPianoRollError,
    TrainingDivergenceError,
)
from chordtex.model import (
    ChordDecoderOutput,
    ChordEncoder,
    ChordTextureVAE,
    GaussianLatent,
    ModelConfig,
    TextureEncoder,
    checkpoint_id,
    chord_loss,
    compute_loss,
    kl_divergence,
    load_vae,
    make_batch,
    pianotree_targets,
    reparameterize,
    save_vae,
    segment_to_pianotree,
    teacher_forced_accuracy,
)
from chordtex.model.encoders import CONV_HEIGHT, POOLED_HEIGHT
from chordtex.model.pianotree import IGNORE_INDEX, PITCH_EOS, bits_to_duration, duration_to_bits
from chordtex.score import Segment, to_matrix, transpose


# ---------- 1) PianoTree ----------
def test_duration_bits_most_significant_first():
    assert duration_to_bits(1) == [0, 0, 0, 0, 0]
    assert duration_to_bits(6) == [0, 0, 1, 0, 1]
    assert duration_to_bits(32) == [1, 1, 1, 1, 1]
    assert all(bits_to_duration(duration_to_bits(d)) == d for d in range(1, 33))
    with pytest.raises(ValueError):
        duration_to_bits(33)


def test_pianotree_targets_layout():
    seg = Segment.from_notes([(0, 64, 2), (0, 60, 8), (5, 72, 1)])
    pitch, bits = pianotree_targets(seg, max_notes=4)
    assert pitch.shape == (32, 5)
    assert bits.shape == (32, 5, 5)
    assert pitch[0].tolist() == [60, 64, PITCH_EOS, IGNORE_INDEX, IGNORE_INDEX]
    assert pitch[1].tolist() == [PITCH_EOS] + [IGNORE_INDEX] * 4
    assert pitch[5, 0].item() == 72
    assert bits[0, 0].tolist() == [0, 0, 1, 1, 1]
    assert bits[0, 2].sum().item() == 0


def test_crowded_frame_keeps_lowest_notes():
    seg = Segment.from_notes([(0, p, 1) for p in range(60, 70)])
    tree = segment_to_pianotree(seg, max_notes=4)
    assert [p for p, _ in tree.frames[0]] == [60, 61, 62, 63]
    assert tree.to_segment().triples() == [(0, p, 1) for p in range(60, 64)]


# ---------- 2) Kodlayıcılar ----------
def test_texture_encoder_feature_shapes(random_segments):
    enc = TextureEncoder(hidden=16, z_dim=8)
    rolls = torch.from_numpy(np.stack([to_matrix(s) for s in random_segments(10)]).astype(np.float32))
    pre, pooled = enc.conv_features(rolls)
    assert pre.shape == (10, 10, CONV_HEIGHT, 8) == (10, 10, 117, 8)
    assert pooled.shape == (10, 10, POOLED_HEIGHT, 8) == (10, 10, 29, 8)
    lat = enc(rolls)
    assert lat.mean.shape == lat.log_variance.shape == (10, 8)


def test_texture_encoder_rejects_wrong_shape():
    with pytest.raises(MalformedPianoRollError) as err:
        TextureEncoder(hidden=8, z_dim=4)(torch.zeros(2, 128, 16))
    assert err.value.exit_code == 2


def test_convolution_commutes_with_pitch_shift(chord_segment):
    enc = TextureEncoder(hidden=8, z_dim=4)
    base = torch.from_numpy(to_matrix(chord_segment)).float().unsqueeze(0)
    moved = torch.from_numpy(to_matrix(transpose(chord_segment, 1))).float().unsqueeze(0)
    pre_base, _ = enc.conv_features(base)
    pre_moved, _ = enc.conv_features(moved)
    torch.testing.assert_close(pre_moved[:, :, 1:], pre_base[:, :, :-1])


def test_octave_shift_moves_pooled_features_by_three_rows(chord_segment):
    enc = TextureEncoder(hidden=8, z_dim=4)
    base = torch.from_numpy(to_matrix(chord_segment)).float().unsqueeze(0)
    moved = torch.from_numpy(to_matrix(transpose(chord_segment, 12))).float().unsqueeze(0)
    pre_base, pooled_base = enc.conv_features(base)
    pre_moved, pooled_moved = enc.conv_features(moved)
    torch.testing.assert_close(pre_moved[:, :, 12:], pre_base[:, :, :-12])
    # 12 perde satırı = 3 havuz satırı
    torch.testing.assert_close(pooled_moved[:, :, 3:], pooled_base[:, :, :-3])


def test_chord_encoder_shapes(chord_segment):
    enc = ChordEncoder(hidden=16, z_dim=6)
    batch = make_batch([chord_segment] * 3)
    lat = enc(batch.chord)
    assert lat.mean.shape == (3, 6)
    with pytest.raises(MalformedChordMatrixError):
        enc(torch.zeros(3, 36, 4))


def test_posterior_means_do_not_depend_on_batch_mates(tiny_vae, random_segments):
    segs = random_segments(4, seed=5)
    alone_chd, alone_txt = tiny_vae.encode_means(segs[:1])
    both_chd, both_txt = tiny_vae.encode_means(segs)
    torch.testing.assert_close(alone_chd[0], both_chd[0])
    torch.testing.assert_close(alone_txt[0], both_txt[0])


# ---------- 3) Kayıplar ----------
def test_chord_loss_at_uniform_logits():
    b = 3
    out = ChordDecoderOutput(torch.zeros(b, 8, 12), torch.zeros(b, 8, 12), torch.zeros(b, 8, 12))
    chord = torch.zeros(b, 36, 8)
    chord[:, 0] = 1
    chord[:, 12] = 1
    chord[:, 24] = 1
    expected = 8 * (2 * math.log(12) + 12 * math.log(2))
    torch.testing.assert_close(chord_loss(out, chord), torch.full((b,), expected))


def test_kl_divergence_closed_form():
    zero = GaussianLatent(torch.zeros(2, 5), torch.zeros(2, 5))
    unit = GaussianLatent(torch.ones(2, 5), torch.zeros(2, 5))
    torch.testing.assert_close(kl_divergence(zero), torch.zeros(2))
    torch.testing.assert_close(kl_divergence(unit), torch.full((2,), 2.5))


def test_chord_encoder_gradients_in_double_precision():
    torch.manual_seed(0)
    enc = ChordEncoder(hidden=3, z_dim=2).double()
    x = torch.rand(1, 36, 8, dtype=torch.double, requires_grad=True)
    assert torch.autograd.gradcheck(lambda inp: enc(inp).mean, (x,), eps=1e-6, atol=1e-4)


def test_kl_gradients_in_double_precision():
    mean = torch.randn(2, 3, dtype=torch.double, requires_grad=True)
    logvar = torch.randn(2, 3, dtype=torch.double, requires_grad=True)
    assert torch.autograd.gradcheck(lambda m, v: kl_divergence(GaussianLatent(m, v)), (mean, logvar))


class _TotalLoss(nn.Module):
    """Sabit gürültüyle toplam kayıp; functional_call parametre alt kümesini bunun üzerinden değiştirir."""

    def __init__(self, vae: ChordTextureVAE, batch) -> None:
        super().__init__()
        self.vae = vae
        self.batch = batch

    def forward(self) -> torch.Tensor:
        gen = torch.Generator().manual_seed(3)
        return compute_loss(self.vae, self.batch, kl_weight=0.1, generator=gen).total


GRADCHECK_PARAMETERS = [
    "vae.chord_encoder.mean_head.bias",
    "vae.texture_encoder.conv.bias",
    "vae.texture_encoder.logvar_head.bias",
    "vae.chord_decoder.root_head.bias",
    "vae.pianotree_decoder.frame_init.bias",
    "vae.pianotree_decoder.duration_head.weight",
]


def test_total_loss_gradients_in_double_precision(tiny_config, random_segments):
    torch.manual_seed(0)
    vae = ChordTextureVAE(tiny_config).double()
    batch = make_batch(random_segments(2, seed=9), max_notes=tiny_config.max_notes).to("cpu", torch.double)
    wrapper = _TotalLoss(vae, batch)
    params = dict(wrapper.named_parameters())
    values = tuple(params[name].detach().clone().requires_grad_(True) for name in GRADCHECK_PARAMETERS)

    def total(*subset):
        return functional_call(wrapper, dict(zip(GRADCHECK_PARAMETERS, subset)), ())

    assert torch.autograd.gradcheck(total, values, eps=1e-4, atol=1e-5, rtol=1e-3)


def test_reparameterize_follows_the_generator():
    lat = GaussianLatent(torch.zeros(4, 3), torch.zeros(4, 3))
    a = reparameterize(lat, torch.Generator().manual_seed(7))
    b = reparameterize(lat, torch.Generator().manual_seed(7))
    torch.testing.assert_close(a, b)


def test_reparameterize_matches_the_posterior_moments():
    draws = 10_000
    mean = torch.tensor([1.5, -2.0, 0.0], dtype=torch.double)
    variance = torch.tensor([0.25, 1.0, 4.0], dtype=torch.double)
    lat = GaussianLatent(mean.expand(draws, 3), variance.log().expand(draws, 3))
    z = reparameterize(lat, torch.Generator().manual_seed(0))
    # 3 standart hata
    mean_se = (variance / draws).sqrt()
    var_se = variance * math.sqrt(2.0 / (draws - 1))
    assert torch.all((z.mean(0) - mean).abs() <= 3 * mean_se)
    assert torch.all((z.var(0) - variance).abs() <= 3 * var_se)


def test_reparameterize_collapses_to_the_mean():
    mean = torch.randn(5, 4, generator=torch.Generator().manual_seed(1))
    lat = GaussianLatent(mean, torch.full((5, 4), float("-inf")))
    torch.testing.assert_close(reparameterize(lat, torch.Generator().manual_seed(2)), mean, rtol=0, atol=0)


def test_compute_loss_components(tiny_vae, random_segments):
    batch = make_batch(random_segments(3), max_notes=tiny_vae.config.max_notes)
    losses = compute_loss(tiny_vae, batch, kl_weight=0.1, generator=torch.Generator().manual_seed(0))
    values = losses.as_dict()
    assert set(values) == {"chord_loss", "pianotree_loss", "kl_chd", "kl_txt", "total_loss"}
    assert all(math.isfinite(v) for v in values.values())
    expected = values["chord_loss"] + values["pianotree_loss"] + 0.1 * (values["kl_chd"] + values["kl_txt"])
    assert values["total_loss"] == pytest.approx(expected, rel=1e-5)


def test_compute_loss_rejects_large_kl_weight(tiny_vae, chord_segment):
    with pytest.raises(ValueError):
        compute_loss(tiny_vae, make_batch([chord_segment], max_notes=4), kl_weight=0.5)


def test_non_finite_loss_raises_divergence(tiny_vae, chord_segment):
    batch = make_batch([chord_segment], max_notes=4)
    batch.roll[0, 60, 0] = float("nan")
    with pytest.raises(TrainingDivergenceError) as err:
        compute_loss(tiny_vae, batch, batch_id="b-17")
    assert "b-17" in str(err.value)
    assert err.value.exit_code == 3


# ---------- 4) Çözüm ve checkpoint ----------
def test_greedy_decoding_yields_valid_segments(tiny_vae):
    z = torch.randn(3, tiny_vae.config.z_dim, generator=torch.Generator().manual_seed(1))
    segments = tiny_vae.decode_segments(z[:, :8], z[:, 8:], [("x", 0), ("x", 8), ("y", 0)])
    assert [s.source for s in segments] == [("x", 0), ("x", 8), ("y", 0)]
    for seg in segments:
        per_onset = {}
        for note in seg.notes:
            per_onset.setdefault(note.onset, []).append(note.pitch)
            assert note.onset + note.duration <= 32
        assert all(len(p) <= tiny_vae.config.max_notes for p in per_onset.values())
        assert all(p == sorted(set(p)) for p in per_onset.values())


def test_greedy_decoding_is_deterministic(tiny_vae):
    z = torch.randn(2, tiny_vae.config.z_dim, generator=torch.Generator().manual_seed(2))
    first = tiny_vae.decode_segments(z[:, :8], z[:, 8:])
    second = tiny_vae.decode_segments(z[:, :8], z[:, 8:])
    assert first == second


def test_checkpoint_reload_restores_the_model(tmp_path, tiny_vae, chord_segment):
    path = save_vae(str(tmp_path / "vae.pt"), tiny_vae, epoch=3, global_step=42)
    model, payload = load_vae(path)
    assert payload["epoch"] == 3
    assert payload["global_step"] == 42
    assert not model.training
    expected = tiny_vae.encode_means([chord_segment])
    actual = model.encode_means([chord_segment])
    torch.testing.assert_close(expected[0], actual[0])
    torch.testing.assert_close(expected[1], actual[1])
    assert len(checkpoint_id(path)) == 12


def test_load_vae_rejects_bad_files(tmp_path):
    junk = tmp_path / "junk.pt"
    junk.write_bytes(b"not a checkpoint")
    with pytest.raises(CheckpointError):
        load_vae(str(junk))
    with pytest.raises(CheckpointError):
        load_vae(str(tmp_path / "missing.pt"))


def test_double_precision_model_runs(tiny_config, chord_segment):
    model = ChordTextureVAE(tiny_config).double()
    batch = make_batch([chord_segment], max_notes=4).to("cpu", torch.double)
    losses = compute_loss(model, batch, generator=torch.Generator().manual_seed(0))
    assert losses.total.dtype == torch.double
    losses.total.backward()


# ---------- 5) Ezberleme ----------
CADENCE = [(48, 60, 64, 67)] * 2 + [(45, 57, 60, 64)] * 2 + [(41, 53, 57, 60)] * 2 + [(43, 55, 59, 62)] * 2


@pytest.mark.slow
def test_overfits_sixteen_fixed_segments(chord_segment, arpeggio_factory):
    torch.manual_seed(0)
    config = ModelConfig(
        z_chd_dim=16, z_txt_dim=32, chord_enc_hidden=32, chord_dec_hidden=64, texture_enc_hidden=64,
        conv_channels=10, frame_hidden=128, note_hidden=64, pitch_embed=32, duration_embed=8,
        summary_hidden=32, duration_hidden=16, max_notes=4,
    )
    model = ChordTextureVAE(config)
    arp = arpeggio_factory(CADENCE, "arp")
    segments = [transpose(chord_segment, k) for k in range(8)] + [transpose(arp, k) for k in range(8)]
    batch = make_batch(segments, max_notes=config.max_notes)
    optimizer = torch.optim.Adam(model.parameters(), lr=1e-3)
    gen = torch.Generator().manual_seed(0)

    pitch_acc = root_acc = 0.0
    for step in range(2000):
        optimizer.zero_grad()
        compute_loss(model, batch, kl_weight=0.0, generator=gen).total.backward()
        optimizer.step()
        if step % 100 == 99:
            hits = teacher_forced_accuracy(model, batch)
            pitch_acc, root_acc = float(hits["pitch"].mean()), float(hits["root"].mean())
            if pitch_acc >= 0.95 and root_acc >= 0.95:
                break

    assert pitch_acc >= 0.95
    assert root_acc >= 0.95
    model.eval()
    z_chd, _ = model.encode_means(segments)
    roots = model.decode_chord(z_chd).root.argmax(-1)
    assert (roots == batch.chord[:, 0:12].argmax(1)).double().mean() >= 0.95
