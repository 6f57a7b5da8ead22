import numpy as np
import pytest

from src.nncore.optim import SGD, Adam, adam_step, sgd_step
from src.nncore.ops import hadamard, total
from src.nncore.tensor import Parameter, backward


def test_sgd_step():
    p = Parameter([[1.0, 2.0]], "p")
    p.grad = np.array([[0.5, -1.0]])
    sgd_step([p], lr=0.1)
    assert np.allclose(p.data, [[0.95, 2.1]])


def test_first_adam_step_moves_by_lr():
    p = Parameter([[1.0, -1.0]], "p")
    p.grad = np.array([[3.0, -0.2]])
    state = adam_step([p], lr=0.01)
    assert state.t == 1
    assert np.allclose(p.data, [[0.99, -0.99]], atol=1e-6)


@pytest.mark.parametrize("make", [lambda ps: SGD(ps, lr=0.1), lambda ps: Adam(ps, lr=0.1)])
def test_optimizers_minimize_a_quadratic(make):
    p = Parameter([[2.0, -3.0]], "p")
    opt = make([p])
    for _ in range(300):
        opt.zero_grad()
        backward(total(hadamard(p, p)))
        opt.step()
    assert np.all(np.abs(p.data) < 0.1)


def test_duplicate_names_rejected():
    with pytest.raises(ValueError):
        SGD([Parameter([[1.0]], "w"), Parameter([[2.0]], "w")], lr=0.1)
