"""Similarity-based multi-label learning."""

from ._core import (
    Classifier,
    Dataset,
    DimensionMismatch,
    ParseError,
    ZeroNormError,
    average_precision,
    coverage,
    cross_validate,
    hamming_loss,
    load_dataset,
    one_error,
    parse_dataset,
    ranking_loss,
)

__all__ = [
    "Classifier",
    "Dataset",
    "DimensionMismatch",
    "ParseError",
    "ZeroNormError",
    "average_precision",
    "coverage",
    "cross_validate",
    "hamming_loss",
    "load_dataset",
    "one_error",
    "parse_dataset",
    "ranking_loss",
]
