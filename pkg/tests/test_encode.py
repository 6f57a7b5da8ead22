import numpy as np
import pytest

from src.data.encode import decode_labels, encode
from src.data.normalize import normalize
from src.data.vocab import NodeVocab, build_vocab
from src.errors import UnknownLabel
from src.hwgraph.graph import GraphKind, GraphNode, HWGraph

from conftest import AND_MODULE, dfg_of


def test_one_hot_rows():
    g = normalize(dfg_of(AND_MODULE))
    vocab = build_vocab([g])
    t = encode(g, vocab, "and2", "Non_Trojan")
    assert t.x.shape == (4, 3)
    assert t.x.dtype == np.float64
    assert np.all(t.x.sum(axis=1) == 1.0)
    assert t.edges.tolist() == [[0, 1], [1, 2], [1, 3]]
    assert t.vocab_fp == vocab.fingerprint
    assert decode_labels(t, vocab) == g.labels()


def test_and_row():
    vocab = NodeVocab(["And", "const", "signal"])
    t = encode(HWGraph(GraphKind.DFG, [GraphNode(0, "And")], []), vocab)
    assert t.x.tolist() == [[1.0, 0.0, 0.0]]
    assert t.edges.shape == (0, 2)


def test_label_outside_vocab():
    with pytest.raises(UnknownLabel):
        encode(HWGraph(GraphKind.DFG, [GraphNode(0, "Or")], []), NodeVocab(["And"]))
