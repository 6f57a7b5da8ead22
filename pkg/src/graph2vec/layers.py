"""
Graph convolution, attention top-k pooling and readout.

Node features are rows, so a layer computes ``act(H W_self + mean_N(H) W_neigh + b)``,
the row-vector form of ``act(W_self h_v + W_neigh a_v + b)``.
"""
import math
from typing import List, Optional, Tuple

import numpy as np

from src.errors import EmptyPool, ShapeMismatch
from src.nncore.ops import (
    ACTIVATIONS,
    Neighborhood,
    add,
    gather_rows,
    hadamard,
    matmul,
    mean_rows,
    neighbor_mean,
    neighborhood,
    sum_rows,
    tanh_,
)
from src.nncore.tensor import Parameter, Tensor


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class ConvLayer:
    def __init__(self, in_dim: int, out_dim: int, activation: str = "relu", name: str = "conv",
                 rng: Optional[np.random.Generator] = None):
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation '{activation}'")
        rng = rng or np.random.default_rng(0)
        self.in_dim, self.out_dim = in_dim, out_dim
        self.activation = activation
        self.w_self = Parameter(glorot(rng, in_dim, out_dim), f"{name}.w_self")
        self.w_neigh = Parameter(glorot(rng, in_dim, out_dim), f"{name}.w_neigh")
        self.bias = Parameter(np.zeros((1, out_dim)), f"{name}.bias")

    def parameters(self) -> List[Parameter]:
        return [self.w_self, self.w_neigh, self.bias]

    def __call__(self, x: Tensor, nb: Neighborhood) -> Tensor:
        if x.shape[1] != self.in_dim:
            raise ShapeMismatch("graph_conv", x.shape, (self.in_dim, self.out_dim))
        h = add(matmul(x, self.w_self), matmul(neighbor_mean(x, nb), self.w_neigh))
        return ACTIVATIONS[self.activation](add(h, self.bias))


class PoolLayer:
    """Scores nodes with its own convolution (raw output, no activation) and keeps the top k."""

    def __init__(self, in_dim: int, ratio: float = 0.5, rng: Optional[np.random.Generator] = None):
        if not 0 < ratio <= 1:
            raise ValueError(f"pooling ratio must lie in (0, 1], got {ratio}")
        self.ratio = ratio
        self.scorer = ConvLayer(in_dim, 1, "identity", "pool.score", rng)

    def parameters(self) -> List[Parameter]:
        return self.scorer.parameters()


def graph_conv(x: Tensor, edges: np.ndarray, layer: ConvLayer, directed: bool = False) -> Tensor:
    return layer(x, neighborhood(edges, x.shape[0], directed))


def score_nodes(x: Tensor, nb: Neighborhood, pool: PoolLayer) -> Tensor:
    """alpha as an n x 1 column."""
    return pool.scorer(x, nb)


def topk_count(ratio: float, n: int) -> int:
    # the epsilon keeps ratios like 0.3 * 10 from rounding up past the exact product
    return max(1, min(n, math.ceil(ratio * n - 1e-9)))


def topk_filter(alpha: np.ndarray, ratio: float, n: int) -> np.ndarray:
    """Indices of the k largest scores, ties to the lower id, returned in ascending order."""
    alpha = np.asarray(alpha, dtype=np.float64).reshape(-1)
    k = topk_count(ratio, n)
    order = np.lexsort((np.arange(n), -alpha))
    return np.sort(order[:k])


def pool(x: Tensor, edges: np.ndarray, alpha: Tensor, keep: np.ndarray) -> Tuple[Tensor, np.ndarray]:
    """Rows ``keep`` of ``x`` gated by tanh(alpha), and the induced edges renumbered by rank in ``keep``."""
    gated = hadamard(gather_rows(x, keep), tanh_(gather_rows(alpha, keep)))
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    rank = np.full(x.shape[0], -1, dtype=np.int64)
    rank[keep] = np.arange(len(keep))
    src, dst = rank[edges[:, 0]], rank[edges[:, 1]]
    inside = (src >= 0) & (dst >= 0)
    return gated, np.stack([src[inside], dst[inside]], axis=1)


def readout(x: Tensor, mode: str = "sum") -> Tensor:
    if x.shape[0] == 0:
        raise EmptyPool("readout over an empty node set")
    if mode == "sum":
        return sum_rows(x)
    if mode == "mean":
        return mean_rows(x)
    raise ValueError(f"unknown readout mode '{mode}'")
