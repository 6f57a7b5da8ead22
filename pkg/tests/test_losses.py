import math

import numpy as np
import pytest

from src.errors import BadLabel, ShapeMismatch
from src.learnpipe.losses import contrastive_loss, cross_entropy


def test_cross_entropy_even_split():
    assert cross_entropy([[0.5, 0.5]], [[1.0, 0.0]]).item() == pytest.approx(math.log(2), abs=1e-4)


def test_cross_entropy_is_additive():
    one = cross_entropy([[0.8, 0.2]], [[0.0, 1.0]]).item()
    two = cross_entropy([[0.8, 0.2], [0.8, 0.2]], [[0.0, 1.0], [0.0, 1.0]]).item()
    assert two == pytest.approx(2 * one)


def test_cross_entropy_zero_probability_is_finite():
    assert np.isfinite(cross_entropy([[0.0, 1.0]], [[1.0, 0.0]]).item())


def test_cross_entropy_shape_check():
    with pytest.raises(ShapeMismatch):
        cross_entropy([[0.5, 0.5]], [[1.0, 0.0, 0.0]])


def test_contrastive_values():
    assert contrastive_loss(0.9, 1).item() == pytest.approx(0.1)
    assert contrastive_loss(0.9, -1, margin=0.5).item() == pytest.approx(0.4)
    assert contrastive_loss(0.2, -1, margin=0.5).item() == 0.0
    assert contrastive_loss(1.0, 1).item() == 0.0


def test_contrastive_rejects_other_labels():
    with pytest.raises(BadLabel):
        contrastive_loss(0.3, 0)
