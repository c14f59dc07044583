"""Video-conference collage analysis pipeline.

Thin Python surface over the native core: perceptual hashing and
near-duplicate detection, face-detector fusion helpers, username
reconstruction, cross-meeting identity linkage, and the end-to-end
pipeline runner.
"""

from ._core import (
    FACE_EMBEDDING_DIM,
    ConfigError,
    Error,
    __version__,
    aggregate_age,
    bin_age,
    compute_dhash,
    embedding_pair_distance,
    hamming_distance,
    ingest_manifest,
    link_identities,
    merge_word_tokens,
    normalize_username,
    run_pipeline,
    supports_extended_formats,
)

__all__ = [
    "FACE_EMBEDDING_DIM",
    "ConfigError",
    "Error",
    "__version__",
    "aggregate_age",
    "bin_age",
    "compute_dhash",
    "embedding_pair_distance",
    "hamming_distance",
    "ingest_manifest",
    "link_identities",
    "merge_word_tokens",
    "normalize_username",
    "run_pipeline",
    "supports_extended_formats",
]
