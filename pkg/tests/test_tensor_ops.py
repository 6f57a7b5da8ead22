import math

import numpy as np
import pytest

from src.errors import NonFinite, ShapeMismatch, ZeroVector
from src.nncore.ops import (
    add,
    concat_rows,
    cosine,
    gather_rows,
    hadamard,
    log_,
    matmul,
    mean_rows,
    neighbor_mean,
    neighborhood,
    relu,
    softmax_rows,
    sum_rows,
    tanh_,
    total,
)
from src.nncore.tensor import Parameter, Tensor, backward, constant


def test_matmul_identity():
    m = constant([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(matmul(constant(np.eye(2)), m).data, m.data)
    with pytest.raises(ShapeMismatch):
        matmul(m, constant(np.ones((3, 1))))


def test_elementwise_values():
    a = constant([[-1.0, 2.0]])
    assert relu(a).data.tolist() == [[0.0, 2.0]]
    assert np.allclose(tanh_(a).data, np.tanh([[-1.0, 2.0]]))
    assert hadamard(a, constant([[3.0, 0.5]])).data.tolist() == [[-3.0, 1.0]]
    assert add(a, constant([[1.0]])).data.tolist() == [[0.0, 3.0]]


def test_broadcast_mismatch():
    with pytest.raises(ShapeMismatch):
        add(constant(np.ones((2, 3))), constant(np.ones((3, 2))))


def test_softmax_rows_sum_to_one_and_are_stable():
    s = softmax_rows(constant([[1000.0, 1000.0], [0.0, math.log(3.0)]])).data
    assert np.allclose(s, [[0.5, 0.5], [0.25, 0.75]])


def test_log_of_zero_is_non_finite():
    with pytest.raises(NonFinite):
        log_(constant([[0.0]]))


def test_row_reductions():
    x = constant([[1.0, 2.0], [3.0, 4.0]])
    assert sum_rows(x).data.tolist() == [[4.0, 6.0]]
    assert mean_rows(x).data.tolist() == [[2.0, 3.0]]
    assert total(x).item() == 10.0


def test_gather_and_concat():
    x = constant([[1.0], [2.0], [3.0]])
    assert gather_rows(x, np.array([2, 0])).data.tolist() == [[3.0], [1.0]]
    assert concat_rows([x, constant([[4.0]])]).shape == (4, 1)
    with pytest.raises(ShapeMismatch):
        concat_rows([x, constant([[1.0, 2.0]])])


def test_neighbor_mean_undirected_and_deduplicated():
    nb = neighborhood(np.array([[0, 1], [0, 1], [1, 2]]), 4)
    x = constant([[1.0], [2.0], [4.0], [8.0]])
    assert neighbor_mean(x, nb).data.tolist() == [[2.0], [2.5], [2.0], [0.0]]


def test_directed_neighborhood_follows_edges():
    nb = neighborhood(np.array([[0, 1]]), 2, directed=True)
    assert neighbor_mean(constant([[1.0], [2.0]]), nb).data.tolist() == [[2.0], [0.0]]


def test_neighborhood_rejects_out_of_range_edges():
    with pytest.raises(ShapeMismatch):
        neighborhood(np.array([[0, 5]]), 2)


def test_cosine():
    assert cosine(constant([[1.0, 0.0]]), constant([[2.0, 0.0]])).item() == pytest.approx(1.0)
    assert cosine(constant([[1.0, 0.0]]), constant([[-3.0, 0.0]])).item() == pytest.approx(-1.0)
    assert cosine(constant([[1.0, 0.0]]), constant([[0.0, 1.0]])).item() == pytest.approx(0.0)
    with pytest.raises(ZeroVector):
        cosine(constant([[0.0, 0.0]]), constant([[1.0, 0.0]]))


def test_backward_matmul_gradients():
    w = Parameter([[1.0, 2.0], [3.0, 4.0]], "w")
    x = constant([[1.0, 1.0]])
    backward(total(matmul(x, w)))
    assert w.grad.tolist() == [[1.0, 1.0], [1.0, 1.0]]


def test_backward_accumulates_shared_inputs():
    w = Parameter([[3.0]], "w")
    backward(total(hadamard(w, w)))
    assert w.grad.tolist() == [[6.0]]


def test_backward_needs_scalar():
    with pytest.raises(ShapeMismatch):
        backward(Parameter(np.ones((2, 1)), "p"))


def test_tensor_rejects_nan():
    with pytest.raises(NonFinite):
        Tensor([[float("nan")]])
