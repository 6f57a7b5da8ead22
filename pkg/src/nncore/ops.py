"""Differentiable matrix operations. Every op checks shapes and finiteness of its result."""
from dataclasses import dataclass

import numpy as np

from src.errors import ShapeMismatch, ZeroVector
from src.nncore.tensor import Tensor

EPS = 1e-12


def _make(data: np.ndarray, children, op: str) -> Tensor:
    return Tensor(data, children, op)  # raises NonFinite


def _unbroadcast(g: np.ndarray, shape) -> np.ndarray:
    for axis, size in enumerate(shape):
        if size == 1 and g.shape[axis] != 1:
            g = g.sum(axis=axis, keepdims=True)
    return g


def _broadcastable(op: str, a: Tensor, b: Tensor):
    for x, y in zip(a.shape, b.shape):
        if x != y and x != 1 and y != 1:
            raise ShapeMismatch(op, a.shape, b.shape)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatch("matmul", a.shape, b.shape)
    out = _make(a.data @ b.data, (a, b), "matmul")

    def _backprop():
        a.accumulate(out.grad @ b.data.T)
        b.accumulate(a.data.T @ out.grad)
    out._backprop = _backprop
    return out


def add(a: Tensor, b: Tensor) -> Tensor:
    """Elementwise sum; either side may be a 1 x m row, an n x 1 column or a 1 x 1 scalar."""
    _broadcastable("add", a, b)
    out = _make(a.data + b.data, (a, b), "add")

    def _backprop():
        a.accumulate(_unbroadcast(out.grad, a.shape))
        b.accumulate(_unbroadcast(out.grad, b.shape))
    out._backprop = _backprop
    return out


def hadamard(a: Tensor, b: Tensor) -> Tensor:
    _broadcastable("hadamard", a, b)
    out = _make(a.data * b.data, (a, b), "hadamard")

    def _backprop():
        a.accumulate(_unbroadcast(out.grad * b.data, a.shape))
        b.accumulate(_unbroadcast(out.grad * a.data, b.shape))
    out._backprop = _backprop
    return out


def scale(a: Tensor, c: float) -> Tensor:
    out = _make(a.data * c, (a,), "scale")

    def _backprop():
        a.accumulate(out.grad * c)
    out._backprop = _backprop
    return out


def shift(a: Tensor, c: float) -> Tensor:
    out = _make(a.data + c, (a,), "shift")

    def _backprop():
        a.accumulate(out.grad)
    out._backprop = _backprop
    return out


def relu(a: Tensor) -> Tensor:
    out = _make(np.maximum(a.data, 0.0), (a,), "relu")

    def _backprop():
        a.accumulate(out.grad * (a.data > 0))
    out._backprop = _backprop
    return out


def tanh_(a: Tensor) -> Tensor:
    t = np.tanh(a.data)
    out = _make(t, (a,), "tanh")

    def _backprop():
        a.accumulate(out.grad * (1.0 - t * t))
    out._backprop = _backprop
    return out


def identity(a: Tensor) -> Tensor:
    return a


def softmax_rows(a: Tensor) -> Tensor:
    e = np.exp(a.data - a.data.max(axis=1, keepdims=True))
    s = e / e.sum(axis=1, keepdims=True)
    out = _make(s, (a,), "softmax_rows")

    def _backprop():
        g = out.grad
        a.accumulate(s * (g - (g * s).sum(axis=1, keepdims=True)))
    out._backprop = _backprop
    return out


def log_(a: Tensor) -> Tensor:
    with np.errstate(divide="ignore", invalid="ignore"):
        out = _make(np.log(a.data), (a,), "log")

    def _backprop():
        a.accumulate(out.grad / a.data)
    out._backprop = _backprop
    return out


def sum_rows(a: Tensor) -> Tensor:
    """Column-wise sum over the rows: n x m -> 1 x m."""
    out = _make(a.data.sum(axis=0, keepdims=True), (a,), "sum_rows")

    def _backprop():
        a.accumulate(np.broadcast_to(out.grad, a.shape))
    out._backprop = _backprop
    return out


def mean_rows(a: Tensor) -> Tensor:
    """Column-wise mean over the rows: n x m -> 1 x m."""
    n = a.shape[0]
    out = _make(a.data.mean(axis=0, keepdims=True), (a,), "mean_rows")

    def _backprop():
        a.accumulate(np.broadcast_to(out.grad / n, a.shape))
    out._backprop = _backprop
    return out


def total(a: Tensor) -> Tensor:
    """Sum of every entry, as a 1 x 1 tensor."""
    out = _make(np.array([[a.data.sum()]]), (a,), "total")

    def _backprop():
        a.accumulate(np.broadcast_to(out.grad, a.shape))
    out._backprop = _backprop
    return out


def gather_rows(a: Tensor, index: np.ndarray) -> Tensor:
    index = np.asarray(index, dtype=np.int64)
    out = _make(a.data[index], (a,), "gather_rows")

    def _backprop():
        g = np.zeros_like(a.data)
        np.add.at(g, index, out.grad)
        a.accumulate(g)
    out._backprop = _backprop
    return out


def concat_rows(parts) -> Tensor:
    parts = list(parts)
    widths = {p.shape[1] for p in parts}
    if len(widths) != 1:
        raise ShapeMismatch("concat_rows", *(p.shape for p in parts))
    out = _make(np.vstack([p.data for p in parts]), tuple(parts), "concat_rows")

    def _backprop():
        start = 0
        for p in parts:
            p.accumulate(out.grad[start:start + p.shape[0]])
            start += p.shape[0]
    out._backprop = _backprop
    return out


@dataclass
class Neighborhood:
    """Message routes of one graph: row ``receivers[i]`` averages row ``senders[i]``."""
    num_nodes: int
    receivers: np.ndarray
    senders: np.ndarray
    inv_degree: np.ndarray  # num_nodes x 1, zero for isolated nodes


def neighborhood(edges: np.ndarray, num_nodes: int, directed: bool = False) -> Neighborhood:
    """Deduplicated neighbor sets; undirected unless ``directed`` (then only edge targets feed sources)."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size and (edges.min() < 0 or edges.max() >= num_nodes):
        raise ShapeMismatch("neighborhood", edges.shape, (num_nodes,))
    pairs = edges if directed else np.vstack([edges, edges[:, ::-1]])
    pairs = np.unique(pairs, axis=0) if pairs.size else pairs.reshape(0, 2)
    receivers, senders = pairs[:, 0], pairs[:, 1]
    degree = np.bincount(receivers, minlength=num_nodes).astype(np.float64).reshape(-1, 1)
    inv = np.divide(1.0, degree, out=np.zeros_like(degree), where=degree > 0)
    return Neighborhood(num_nodes, receivers, senders, inv)


def neighbor_mean(x: Tensor, nb: Neighborhood) -> Tensor:
    """Row v becomes the mean of the rows of v's neighbors (zeros when v has none)."""
    if x.shape[0] != nb.num_nodes:
        raise ShapeMismatch("neighbor_mean", x.shape, (nb.num_nodes,))
    agg = np.zeros_like(x.data)
    np.add.at(agg, nb.receivers, x.data[nb.senders])
    out = _make(agg * nb.inv_degree, (x,), "neighbor_mean")

    def _backprop():
        g = out.grad * nb.inv_degree
        gx = np.zeros_like(x.data)
        np.add.at(gx, nb.senders, g[nb.receivers])
        x.accumulate(gx)
    out._backprop = _backprop
    return out


def cosine(u: Tensor, v: Tensor) -> Tensor:
    """u.v / (|u| |v|) as a 1 x 1 tensor, clamped to [-1, 1]."""
    if u.shape != v.shape or u.shape[0] != 1:
        raise ShapeMismatch("cosine", u.shape, v.shape)
    a, b = u.data.reshape(-1), v.data.reshape(-1)
    nu, nv = np.linalg.norm(a), np.linalg.norm(b)
    if nu <= EPS or nv <= EPS:
        raise ZeroVector(f"cosine of a vector with norm below {EPS}")
    raw = float(a @ b) / (nu * nv)
    out = _make(np.array([[min(1.0, max(-1.0, raw))]]), (u, v), "cosine")

    def _backprop():
        g = out.grad[0, 0]
        u.accumulate((g * (b / (nu * nv) - raw * a / (nu * nu))).reshape(u.shape))
        v.accumulate((g * (a / (nu * nv) - raw * b / (nv * nv))).reshape(v.shape))
    out._backprop = _backprop
    return out


ACTIVATIONS = {"relu": relu, "tanh": tanh_, "identity": identity}
