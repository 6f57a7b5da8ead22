import itertools

import numpy as np
import pytest

from src.errors import EmptyPool, ShapeMismatch
from src.graph2vec.layers import ConvLayer, PoolLayer, graph_conv, pool, readout, score_nodes, topk_count, topk_filter
from src.nncore.ops import neighborhood
from src.nncore.tensor import Parameter, constant


def unit_layer(dim, activation="identity"):
    layer = ConvLayer(dim, dim, activation)
    layer.w_self = Parameter(np.eye(dim), "w_self")
    layer.w_neigh = Parameter(np.eye(dim), "w_neigh")
    return layer


def test_two_node_identity_example():
    x = constant([[1.0, 2.0], [3.0, 5.0]])
    out = graph_conv(x, np.array([[0, 1]]), unit_layer(2))
    assert out.data.tolist() == [[4.0, 7.0], [4.0, 7.0]]


def test_no_edges_only_self_term():
    rng = np.random.default_rng(1)
    layer = ConvLayer(3, 2, "tanh", rng=rng)
    layer.bias = Parameter(rng.normal(size=(1, 2)), "bias")
    x = constant(rng.normal(size=(4, 3)))
    out = graph_conv(x, np.zeros((0, 2), dtype=np.int64), layer)
    assert np.allclose(out.data, np.tanh(x.data @ layer.w_self.data + layer.bias.data))


def test_conv_width_mismatch():
    with pytest.raises(ShapeMismatch):
        graph_conv(constant(np.ones((2, 3))), np.zeros((0, 2)), ConvLayer(4, 2))


def test_unit_scorer_on_two_node_example():
    p = PoolLayer(2, 0.5)
    p.scorer.w_self = Parameter([[1.0], [1.0]], "s")
    p.scorer.w_neigh = Parameter([[1.0], [1.0]], "n")
    x = constant([[1.0, 2.0], [3.0, 5.0]])
    alpha = score_nodes(x, neighborhood(np.array([[0, 1]]), 2), p)
    assert alpha.data.tolist() == [[11.0], [11.0]]
    assert topk_filter(alpha.data, 0.5, 2).tolist() == [0]


def test_edgeless_scores_are_local():
    p = PoolLayer(2, 0.5, np.random.default_rng(3))
    x = constant([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    alpha = score_nodes(x, neighborhood(np.zeros((0, 2)), 3), p).data
    assert alpha[0, 0] == alpha[2, 0]


def test_topk_examples():
    assert topk_filter(np.array([0.9, 0.1, 0.5, 0.3]), 0.5, 4).tolist() == [0, 2]
    assert topk_filter(np.array([0.9, 0.1, 0.5, 0.3]), 1.0, 4).tolist() == [0, 1, 2, 3]
    assert topk_filter(np.array([0.2, 0.7, 0.7, 0.7]), 0.5, 4).tolist() == [1, 2]


@pytest.mark.parametrize("ratio,n,k", [(0.5, 1, 1), (0.5, 5, 3), (0.3, 10, 3), (0.01, 50, 1), (1.0, 7, 7)])
def test_topk_count(ratio, n, k):
    assert topk_count(ratio, n) == k


def test_pool_ratio_bounds():
    with pytest.raises(ValueError):
        PoolLayer(2, 0.0)
    with pytest.raises(ValueError):
        PoolLayer(2, 1.5)


def test_pool_renumbers_induced_edges():
    x = constant(np.arange(8.0).reshape(4, 2))
    alpha = constant([[1.0], [0.0], [2.0], [0.0]])
    gated, edges = pool(x, np.array([[0, 2], [0, 1], [3, 2]]), alpha, np.array([0, 2]))
    assert edges.tolist() == [[0, 1]]
    assert np.allclose(gated.data, [[0.0, np.tanh(1.0)], [4 * np.tanh(2.0), 5 * np.tanh(2.0)]])


def test_zero_scores_zero_features():
    gated, _ = pool(constant(np.ones((3, 2))), np.zeros((0, 2)), constant(np.zeros((3, 1))), np.arange(3))
    assert np.all(gated.data == 0.0)


def test_pool_matches_induced_subgraph():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        edges = np.array([e for e in itertools.permutations(range(n), 2) if rng.random() < 0.3]).reshape(-1, 2)
        keep = np.sort(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False))
        _, pooled = pool(constant(np.ones((n, 1))), edges, constant(np.ones((n, 1))), keep)
        expected = [[int(np.searchsorted(keep, s)), int(np.searchsorted(keep, d))]
                    for s, d in edges if s in keep and d in keep]
        assert pooled.tolist() == expected


def test_readout():
    x = constant([[1.0, 2.0], [3.0, 4.0]])
    assert readout(x, "sum").data.tolist() == [[4.0, 6.0]]
    assert readout(x, "mean").data.tolist() == [[2.0, 3.0]]
    with pytest.raises(EmptyPool):
        readout(constant(np.zeros((0, 2))), "sum")
    with pytest.raises(ValueError):
        readout(x, "max")
