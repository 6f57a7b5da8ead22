from typing import Dict, List, Sequence

import numpy as np

from src.nncore.tensor import Parameter


def _grad(p: Parameter) -> np.ndarray:
    return p.grad if p.grad is not None else np.zeros_like(p.data)


def sgd_step(params: Sequence[Parameter], lr: float):
    for p in params:
        p.data = p.data - lr * _grad(p)


class AdamState:
    """Per-parameter first/second moment estimates and the shared step counter."""

    def __init__(self):
        self.t = 0
        self.m: Dict[str, np.ndarray] = {}
        self.v: Dict[str, np.ndarray] = {}


def adam_step(params: Sequence[Parameter], lr: float, beta1: float = 0.9, beta2: float = 0.999,
              eps: float = 1e-8, state: AdamState = None) -> AdamState:
    state = state or AdamState()
    state.t += 1
    for p in params:
        g = _grad(p)
        m = beta1 * state.m.get(p.name, 0.0) + (1 - beta1) * g
        v = beta2 * state.v.get(p.name, 0.0) + (1 - beta2) * g * g
        state.m[p.name], state.v[p.name] = m, v
        m_hat = m / (1 - beta1 ** state.t)
        v_hat = v / (1 - beta2 ** state.t)
        p.data = p.data - lr * m_hat / (np.sqrt(v_hat) + eps)
    return state


class Optimizer:
    def __init__(self, params: List[Parameter]):
        self.params = list(params)
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise ValueError("parameters need unique names")

    def zero_grad(self):
        for p in self.params:
            p.zero_grad()

    def step(self):
        raise NotImplementedError


class SGD(Optimizer):
    def __init__(self, params: List[Parameter], lr: float):
        super().__init__(params)
        self.lr = lr

    def step(self):
        sgd_step(self.params, self.lr)


class Adam(Optimizer):
    def __init__(self, params: List[Parameter], lr: float = 1e-3, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        super().__init__(params)
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.state = AdamState()

    def step(self):
        adam_step(self.params, self.lr, self.beta1, self.beta2, self.eps, self.state)
