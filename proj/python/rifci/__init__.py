"""Recursive journal impact factors with bootstrap confidence intervals."""

from ._core import (
    CitationDataset,
    CrossCitationSystem,
    DataError,
    Journal,
    NumericalError,
    bootstrap,
    build_system,
    compute,
    eigenfactor,
    empirical_ranks,
    filter_low_citers,
    generate_synthetic,
    goldstein_rank_ci,
    invariant_rif,
    koczy_modified,
    liebowitz_palmer,
    load_dataset,
    rank_confidence_sets,
    simple_if,
)

__all__ = [
    "CitationDataset",
    "CrossCitationSystem",
    "DataError",
    "Journal",
    "NumericalError",
    "bootstrap",
    "build_system",
    "compute",
    "eigenfactor",
    "empirical_ranks",
    "filter_low_citers",
    "generate_synthetic",
    "goldstein_rank_ci",
    "invariant_rif",
    "koczy_modified",
    "liebowitz_palmer",
    "load_dataset",
    "rank_confidence_sets",
    "simple_if",
]
