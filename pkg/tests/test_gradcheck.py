import numpy as np
import pytest

from src.config import ModelConfig
from src.graph2vec.model import GnnModel
from src.learnpipe.losses import cross_entropy
from src.nncore.gradcheck import gradcheck
from src.nncore.ops import (
    add,
    cosine,
    log_,
    matmul,
    mean_rows,
    neighbor_mean,
    neighborhood,
    relu,
    softmax_rows,
    tanh_,
    total,
)
from src.nncore.tensor import Parameter, constant

from conftest import random_tensors


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def test_dense_tanh_softmax(rng):
    w = Parameter(rng.normal(size=(3, 2)), "w")
    b = Parameter(rng.normal(size=(1, 2)), "b")
    x = constant(rng.normal(size=(4, 3)))

    def loss():
        return total(log_(softmax_rows(tanh_(add(matmul(x, w), b)))))

    assert gradcheck(loss, [w, b]) < 1e-4


def test_neighbor_mean_and_readout(rng):
    w = Parameter(rng.normal(size=(2, 3)), "w")
    x = constant(rng.normal(size=(5, 2)))
    nb = neighborhood(np.array([[0, 1], [1, 2], [2, 0], [3, 4]]), 5)

    def loss():
        return total(tanh_(mean_rows(neighbor_mean(matmul(x, w), nb))))

    assert gradcheck(loss, [w]) < 1e-4


def test_cosine_gradient(rng):
    u = Parameter(rng.normal(size=(1, 4)), "u")
    v = Parameter(rng.normal(size=(1, 4)), "v")
    assert gradcheck(lambda: cosine(u, v), [u, v]) < 1e-4


def test_relu_away_from_kink():
    w = Parameter([[0.5, -0.7], [1.5, 0.3]], "w")
    x = constant([[1.0, 2.0]])
    assert gradcheck(lambda: total(relu(matmul(x, w))), [w]) < 1e-4


def model_loss_gradcheck(seed):
    rng = np.random.default_rng(seed)
    t = random_tensors(rng, int(rng.integers(5, 21)), 3)
    model = GnnModel(3, ModelConfig(conv_dims=[4, 3], activation="tanh", mlp_hidden=[3]), seed=seed)
    target = np.array([[1.0, 0.0]])
    return gradcheck(lambda: cross_entropy(model.class_probs(model.embed_tensor(t)), target),
                     model.parameters(), max_entries=6, rng=rng)


def test_full_model_gradient():
    assert model_loss_gradcheck(0) < 1e-4


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(1, 100))
def test_full_model_gradient_many_seeds(seed):
    assert model_loss_gradcheck(seed) < 1e-4
