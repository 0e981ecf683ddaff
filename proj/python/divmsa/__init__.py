"""Progressive multiple sequence alignment on a divisive-clustering guide tree."""

from ._core import (
    PairwiseResult,
    __version__,
    align,
    evaluate,
    hamming_aligned,
    levenshtein,
    nw_align,
)

__all__ = [
    "PairwiseResult",
    "__version__",
    "align",
    "evaluate",
    "hamming_aligned",
    "levenshtein",
    "nw_align",
]
