import numpy as np
import pytest

from embed_export.pooling import cls_pool, mean_masked_pool


def test_mean_masked_ignores_padding():
    hidden = np.array(
        [
            [[1.0, 2.0], [3.0, 4.0], [100.0, 100.0]],
            [[2.0, 2.0], [50.0, 50.0], [50.0, 50.0]],
        ]
    )
    mask = np.array([[1, 1, 0], [1, 0, 0]])
    pooled = mean_masked_pool(hidden, mask)
    assert np.allclose(pooled[0], [2.0, 3.0])
    assert np.allclose(pooled[1], [2.0, 2.0])


def test_mean_masked_full_mask_is_plain_mean():
    rng = np.random.default_rng(1)
    hidden = rng.normal(size=(4, 7, 5))
    mask = np.ones((4, 7))
    assert np.allclose(mean_masked_pool(hidden, mask), hidden.mean(axis=1))


def test_mean_masked_rejects_empty_sequences():
    with pytest.raises(ValueError, match="all-zero"):
        mean_masked_pool(np.zeros((1, 3, 2)), np.zeros((1, 3)))


def test_mean_masked_shape_check():
    with pytest.raises(ValueError):
        mean_masked_pool(np.zeros((2, 3, 4)), np.zeros((3, 3)))


def test_cls_pool_takes_first_token():
    rng = np.random.default_rng(2)
    hidden = rng.normal(size=(3, 6, 4))
    pooled = cls_pool(hidden)
    assert np.array_equal(pooled, hidden[:, 0, :])
    pooled[0, 0] = 99.0  # returned array is a copy
    assert hidden[0, 0, 0] != 99.0
