from chordtex.arranger.config import ArrangerConfig
from chordtex.arranger.data import PairedCorpus, PairedSample, build_paired_samples, read_manifest
from chordtex.arranger.inference import arrange
from chordtex.arranger.melody import (
    BaselineMelodyEmbedder,
    MelodyEmbedder,
    MelodyUnitEmbedding,
    embed_melody,
    melody_inputs,
    monophonize,
)
from chordtex.arranger.model import FACTOR_COUNT, ArrangerModel, LatentArranger
from chordtex.arranger.train import (
    ARRANGER_FORMAT_VERSION,
    ArrangerTrainResult,
    load_arranger,
    save_arranger,
    train_arranger,
)

__all__ = [
    "ARRANGER_FORMAT_VERSION", "FACTOR_COUNT", "ArrangerConfig", "ArrangerModel", "ArrangerTrainResult",
    "BaselineMelodyEmbedder", "LatentArranger", "MelodyEmbedder", "MelodyUnitEmbedding", "PairedCorpus",
    "PairedSample", "arrange", "build_paired_samples", "embed_melody", "load_arranger", "melody_inputs",
    "monophonize", "read_manifest", "save_arranger", "train_arranger",
]
