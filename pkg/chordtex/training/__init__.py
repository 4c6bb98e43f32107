from chordtex.training.config import TrainConfig
from chordtex.training.corpus import CorpusIndex, build_corpus, preprocess_directory, split_songs
from chordtex.training.dataset import SegmentDataset
from chordtex.training.schedules import KLAnnealer, exponential_gamma, warmup_inverse_sqrt
from chordtex.training.trainer import TrainResult, VAETrainer, train

__all__ = [
    "CorpusIndex", "KLAnnealer", "SegmentDataset", "TrainConfig", "TrainResult", "VAETrainer",
    "build_corpus", "exponential_gamma", "preprocess_directory", "split_songs", "train", "warmup_inverse_sqrt",
]
