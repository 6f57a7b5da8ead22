from typing import Union

import numpy as np

from src.errors import BadLabel, ShapeMismatch
from src.nncore.ops import hadamard, log_, relu, scale, shift, total
from src.nncore.tensor import Tensor, constant

EPS = 1e-12

ArrayLike = Union[Tensor, np.ndarray, list, float]


def _tensor(v: ArrayLike) -> Tensor:
    if isinstance(v, Tensor):
        return v
    return constant(np.asarray(v, dtype=np.float64).reshape(1, -1) if np.ndim(v) < 2 else v)


def cross_entropy(probs: ArrayLike, onehot: ArrayLike) -> Tensor:
    """-sum_i sum_c Y[i, c] * log(P[i, c] + eps) over the whole batch."""
    p, y = _tensor(probs), _tensor(onehot)
    if p.shape != y.shape:
        raise ShapeMismatch("cross_entropy", p.shape, y.shape)
    return scale(total(hadamard(y, log_(shift(p, EPS)))), -1.0)


def contrastive_loss(similarity: ArrayLike, label: int, margin: float = 0.5) -> Tensor:
    """1 - s for a similar pair (+1); max(0, s - margin) for a dissimilar one (-1)."""
    s = _tensor(similarity)
    if s.shape != (1, 1):
        raise ShapeMismatch("contrastive_loss", s.shape, (1, 1))
    if label == 1:
        return shift(scale(s, -1.0), 1.0)
    if label == -1:
        return relu(shift(s, -margin))
    raise BadLabel(label)
