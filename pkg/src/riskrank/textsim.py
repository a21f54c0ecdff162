"""Word tokenization and token-set Jaccard similarity.

The tokenizer lower-cases its input and splits on maximal runs of
non-alphanumeric characters, so its output is bit-identical across platforms.
Short risk-factor phrases contain no clitics or intra-word punctuation, so
this coincides with library word tokenizers on the working corpus.
"""

from __future__ import annotations

import re

_SEPARATORS = re.compile(r"[^0-9a-z]+")


def tokenize(text: str) -> frozenset[str]:
    """Lower-case ``text`` and split into a set of alphanumeric tokens.

    Empty input (or input with no alphanumeric characters) gives the empty
    set. Deterministic; duplicates collapse by set semantics.
    """
    return frozenset(t for t in _SEPARATORS.split(text.lower()) if t)


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    """|A n B| / |A u B|; two empty sets are defined to have similarity 0.

    The 0/0 case is pinned to 0 so degenerate pairs sort like disjoint ones
    under argmax.
    """
    union = len(a | b)
    if union == 0:
        return 0.0
    return len(a & b) / union
