from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from src.data.vocab import NodeVocab
from src.hwgraph.graph import HWGraph


@dataclass(eq=False)
class GraphTensors:
    x: np.ndarray  # |V| x d one-hot, float64
    edges: np.ndarray  # E x 2 int64, (src, dst)
    graph_id: str
    label: Optional[str] = None
    vocab_fp: str = ""

    @property
    def num_nodes(self) -> int:
        return self.x.shape[0]

    def equals(self, other: "GraphTensors") -> bool:
        return (
            self.graph_id == other.graph_id
            and self.label == other.label
            and self.vocab_fp == other.vocab_fp
            and self.x.dtype == other.x.dtype
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.edges, other.edges)
        )


def encode(g: HWGraph, vocab: NodeVocab, graph_id: Optional[str] = None,
           label: Optional[str] = None) -> GraphTensors:
    """One-hot node features by type label; the edge list is carried over unchanged."""
    x = np.zeros((g.num_nodes, len(vocab)), dtype=np.float64)
    for n in g.nodes:
        x[n.id, vocab.position(n.label)] = 1.0
    edges = np.asarray(g.edges, dtype=np.int64).reshape(-1, 2)
    return GraphTensors(x, edges, graph_id or g.design_name, label, vocab.fingerprint)


def decode_labels(t: GraphTensors, vocab: NodeVocab) -> List[str]:
    return [vocab.labels[i] for i in t.x.argmax(axis=1)]
