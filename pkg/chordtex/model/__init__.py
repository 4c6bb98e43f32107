from chordtex.model.batch import VAEBatch, build_example, collate_examples, make_batch
from chordtex.model.checkpoint import (
    VAE_FORMAT_VERSION,
    checkpoint_id,
    load_checkpoint,
    load_vae,
    save_checkpoint,
    save_vae,
)
from chordtex.model.config import ModelConfig
from chordtex.model.decoders import ChordDecoder, ChordDecoderOutput, PianoTreeDecoder, PianoTreeOutput
from chordtex.model.encoders import ChordEncoder, GaussianLatent, TextureEncoder, reparameterize
from chordtex.model.pianotree import PianoTree, pianotree_targets, segment_to_pianotree
from chordtex.model.vae import (
    ChordTextureVAE,
    LossComponents,
    chord_loss,
    compute_loss,
    kl_divergence,
    pianotree_loss,
    teacher_forced_accuracy,
)

__all__ = [
    "VAE_FORMAT_VERSION", "ChordDecoder", "ChordDecoderOutput", "ChordEncoder", "ChordTextureVAE",
    "GaussianLatent", "LossComponents", "ModelConfig", "PianoTree", "PianoTreeDecoder", "PianoTreeOutput",
    "TextureEncoder", "VAEBatch", "build_example", "checkpoint_id", "chord_loss", "collate_examples",
    "compute_loss", "kl_divergence", "load_checkpoint", "load_vae", "make_batch", "pianotree_loss",
    "pianotree_targets", "reparameterize", "save_checkpoint", "save_vae", "segment_to_pianotree",
    "teacher_forced_accuracy",
]
