"""
GnnModel: graph convolutions, one attention pool, a readout and a task head.

The classifier head is an MLP ending in a 2-way softmax whose index 0 is Trojan.
The siamese head has no parameters of its own; a pair is scored by the cosine of
the two embeddings produced by the shared stack.
"""
import logging
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np

from src.config import ModelConfig
from src.data.encode import GraphTensors
from src.errors import ShapeMismatch, VocabMismatch, WrongHead
from src.graph2vec.layers import (
    ConvLayer,
    PoolLayer,
    glorot,
    pool,
    readout,
    score_nodes,
    topk_filter,
)
from src.nncore.ops import ACTIVATIONS, add, cosine, matmul, neighborhood, softmax_rows
from src.nncore.tensor import Parameter, Tensor, constant

logger = logging.getLogger(__name__)

Head = Literal["classifier", "siamese"]
TROJAN, NON_TROJAN = 0, 1


class Dense:
    def __init__(self, in_dim: int, out_dim: int, activation: str, name: str, rng: np.random.Generator):
        self.activation = activation
        self.weight = Parameter(glorot(rng, in_dim, out_dim), f"{name}.weight")
        self.bias = Parameter(np.zeros((1, out_dim)), f"{name}.bias")

    def parameters(self) -> List[Parameter]:
        return [self.weight, self.bias]

    def __call__(self, x: Tensor) -> Tensor:
        return ACTIVATIONS[self.activation](add(matmul(x, self.weight), self.bias))


class GnnModel:
    def __init__(self, in_dim: int, config: Optional[ModelConfig] = None, head: Head = "classifier",
                 seed: int = 0, vocab_fp: str = ""):
        if head not in ("classifier", "siamese"):
            raise ValueError(f"unknown head '{head}'")
        self.in_dim = in_dim
        self.config = config or ModelConfig()
        self.head = head
        self.seed = seed
        self.vocab_fp = vocab_fp

        rng = np.random.default_rng(seed)
        dims = [in_dim] + list(self.config.conv_dims)
        self.convs = [
            ConvLayer(dims[i], dims[i + 1], self.config.activation, f"conv{i}", rng)
            for i in range(len(dims) - 1)
        ]
        self.pool = PoolLayer(dims[-1], self.config.pooling_ratio, rng)
        self.mlp: List[Dense] = []
        if head == "classifier":
            widths = [dims[-1]] + list(self.config.mlp_hidden) + [2]
            for i in range(len(widths) - 1):
                last = i == len(widths) - 2
                self.mlp.append(Dense(widths[i], widths[i + 1], "identity" if last else "relu", f"mlp{i}", rng))

    @property
    def embedding_dim(self) -> int:
        return self.convs[-1].out_dim

    def parameters(self) -> List[Parameter]:
        params = [p for layer in self.convs for p in layer.parameters()]
        params += self.pool.parameters()
        params += [p for layer in self.mlp for p in layer.parameters()]
        return params

    def named_parameters(self) -> Dict[str, Parameter]:
        return {p.name: p for p in self.parameters()}

    def arch(self) -> dict:
        return {"in_dim": self.in_dim, "head": self.head, "seed": self.seed, "model": self.config.model_dump()}

    # --- forward passes (differentiable) ---

    def _check(self, t: GraphTensors):
        if self.vocab_fp and t.vocab_fp and t.vocab_fp != self.vocab_fp:
            raise VocabMismatch(self.vocab_fp, t.vocab_fp,
                                "re-encode the designs with the vocabulary saved beside the checkpoint")
        if t.x.shape[1] != self.in_dim:
            raise ShapeMismatch("embed", t.x.shape, (t.num_nodes, self.in_dim))

    def forward_nodes(self, t: GraphTensors) -> Tuple[Tensor, np.ndarray]:
        """Pooled node matrix and its induced edges."""
        self._check(t)
        nb = neighborhood(t.edges, t.num_nodes, self.config.directed_messages)
        x = constant(t.x)
        for layer in self.convs:
            x = layer(x, nb)
        alpha = score_nodes(x, nb, self.pool)
        keep = topk_filter(alpha.data, self.pool.ratio, t.num_nodes)
        return pool(x, t.edges, alpha, keep)

    def embed_tensor(self, t: GraphTensors) -> Tensor:
        x_pool, _ = self.forward_nodes(t)
        return readout(x_pool, self.config.readout)

    def class_probs(self, h_g: Tensor) -> Tensor:
        if self.head != "classifier":
            raise WrongHead("classifier", self.head)
        if h_g.shape != (1, self.embedding_dim):
            raise ShapeMismatch("classify", h_g.shape, (1, self.embedding_dim))
        out = h_g
        for layer in self.mlp:
            out = layer(out)
        return softmax_rows(out)

    def pair_score(self, t1: GraphTensors, t2: GraphTensors) -> Tensor:
        if self.head != "siamese":
            raise WrongHead("siamese", self.head)
        return cosine(self.embed_tensor(t1), self.embed_tensor(t2))


def _as_row(h: Union[Tensor, Sequence[float], np.ndarray]) -> Tensor:
    if isinstance(h, Tensor):
        return h
    return constant(np.asarray(h, dtype=np.float64).reshape(1, -1))


def embed(model: GnnModel, tensors: GraphTensors) -> np.ndarray:
    """The graph embedding h_g as a flat vector."""
    return model.embed_tensor(tensors).data.reshape(-1).copy()


def classify(model: GnnModel, h_g) -> np.ndarray:
    """[p(Trojan), p(Non_Trojan)] for an embedding."""
    return model.class_probs(_as_row(h_g)).data.reshape(-1).copy()


def pair_similarity(model: GnnModel, h_g1, h_g2) -> float:
    if model.head != "siamese":
        raise WrongHead("siamese", model.head)
    return cosine(_as_row(h_g1), _as_row(h_g2)).item()
