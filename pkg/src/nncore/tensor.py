"""
Reverse-mode autodiff over 2-D float64 matrices.

Each op returns a Tensor that remembers its inputs and a closure pushing the output
gradient back to them; :func:`backward` replays those closures in reverse topological order.
"""
from typing import Callable, List, Optional, Sequence

import numpy as np

from src.errors import NonFinite, ShapeMismatch


def check_finite(data: np.ndarray, op: str):
    if not np.all(np.isfinite(data)):
        raise NonFinite(op)


class Tensor:
    def __init__(self, data, _children: Sequence["Tensor"] = (), _op: str = "", requires_grad: bool = False):
        data = np.asarray(data, dtype=np.float64)
        if data.ndim == 1:
            data = data.reshape(1, -1)
        if data.ndim != 2:
            raise ShapeMismatch(_op or "tensor", data.shape)
        check_finite(data, _op or "tensor")
        self.data = data
        self.grad: Optional[np.ndarray] = None
        self._prev = tuple(_children)
        self._op = _op
        self._backprop: Optional[Callable[[], None]] = None
        self.requires_grad = requires_grad or any(c.requires_grad for c in self._prev)

    @property
    def shape(self):
        return self.data.shape

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def accumulate(self, g: np.ndarray):
        if not self.requires_grad:
            return
        self.grad = g.copy() if self.grad is None else self.grad + g

    def __repr__(self):
        return f"Tensor(shape={self.shape}, op={self._op!r})"


class Parameter(Tensor):
    def __init__(self, data, name: str = ""):
        super().__init__(data, requires_grad=True)
        self.name = name
        self.zero_grad()

    def zero_grad(self):
        self.grad = np.zeros_like(self.data)

    def __repr__(self):
        return f"Parameter({self.name!r}, shape={self.shape})"


def constant(data) -> Tensor:
    return Tensor(data)


def _topological(root: Tensor) -> List[Tensor]:
    order, visited = [], set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        stack.extend((c, False) for c in node._prev if id(c) not in visited and c.requires_grad)
    return order


def backward(loss: Tensor):
    """Populate ``.grad`` of every tensor (and so every Parameter) that ``loss`` depends on."""
    if loss.shape != (1, 1):
        raise ShapeMismatch("backward", loss.shape, (1, 1))
    check_finite(loss.data, "backward")
    if not loss.requires_grad:
        return
    loss.grad = np.ones((1, 1))
    for node in reversed(_topological(loss)):
        if node._backprop is not None and node.grad is not None:
            node._backprop()
            for child in node._prev:
                if child.grad is not None:
                    check_finite(child.grad, f"backward:{node._op}")
