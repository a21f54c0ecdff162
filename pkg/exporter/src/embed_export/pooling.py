"""Sentence-vector pooling over token hidden states.

Pure numpy so the math is testable without a model runtime. ``hidden`` is
(batch, tokens, dim); ``mask`` is (batch, tokens) with 1 for real tokens and
0 for padding.
"""

from __future__ import annotations

import numpy as np

POOLINGS = ("mean_masked", "cls")


def mean_masked_pool(hidden: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Mean of the hidden states where the attention mask is set.

    Padding positions contribute nothing; each sentence divides by its own
    real-token count. A sentence with an all-zero mask is rejected.
    """
    hidden = np.asarray(hidden, dtype=np.float64)
    mask = np.asarray(mask, dtype=np.float64)
    if hidden.ndim != 3 or mask.shape != hidden.shape[:2]:
        raise ValueError("hidden must be (batch, tokens, dim) with matching mask")
    counts = mask.sum(axis=1)
    if np.any(counts == 0):
        raise ValueError("a sequence has an all-zero attention mask")
    summed = (hidden * mask[:, :, None]).sum(axis=1)
    return summed / counts[:, None]


def cls_pool(hidden: np.ndarray) -> np.ndarray:
    """The first token's hidden state per sentence."""
    hidden = np.asarray(hidden, dtype=np.float64)
    if hidden.ndim != 3:
        raise ValueError("hidden must be (batch, tokens, dim)")
    return hidden[:, 0, :].copy()
