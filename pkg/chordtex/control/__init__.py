from chordtex.control.generation import (
    LatentPair,
    decode_pairs,
    encode_segments,
    reconstruct,
    split_into_units,
    style_transfer,
    transfer_from_pool,
    vary_texture_posterior,
    vary_texture_prior,
)

__all__ = [
    "LatentPair", "decode_pairs", "encode_segments", "reconstruct", "split_into_units",
    "style_transfer", "transfer_from_pool", "vary_texture_posterior", "vary_texture_prior",
]
