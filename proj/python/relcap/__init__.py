"""Relation-graph image captioner.

Thin wrapper over the C++ core: spatial/semantic relation graphs over
detected regions, gated graph-convolution encoding, attention-LSTM decoding,
late fusion and BLEU evaluation.
"""

from relcap._core import (
    build_spatial_graph,
    caption,
    classify_spatial,
    corpus_bleu,
    evaluate,
    fuse,
    gen_data,
    gradcheck,
    iou,
    relative_geometry,
    spatial_class_name,
    tokenize,
    train,
)

__all__ = [
    "build_spatial_graph",
    "caption",
    "classify_spatial",
    "corpus_bleu",
    "evaluate",
    "fuse",
    "gen_data",
    "gradcheck",
    "iou",
    "relative_geometry",
    "spatial_class_name",
    "tokenize",
    "train",
]
