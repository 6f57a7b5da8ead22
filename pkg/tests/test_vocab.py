import pytest

from src.data.normalize import normalize
from src.data.vocab import NodeVocab, build_vocab
from src.errors import EmptyCorpus, UnknownLabel
from src.hwgraph.graph import GraphKind, GraphNode, HWGraph

from conftest import AND_MODULE, dfg_of


def graph(*labels):
    return HWGraph(GraphKind.DFG, [GraphNode(i, l) for i, l in enumerate(labels)], [])


def test_sorted_union():
    assert build_vocab([graph("signal", "And", "const")]).labels == ["And", "const", "signal"]
    assert build_vocab([graph("signal", "And"), graph("And", "Or")]).labels == ["And", "Or", "signal"]


def test_four_node_example_has_three_labels():
    assert len(build_vocab([normalize(dfg_of(AND_MODULE))])) == 3


def test_empty_corpus():
    with pytest.raises(EmptyCorpus):
        build_vocab([])


def test_position_and_unknown():
    vocab = NodeVocab(["signal", "And"])
    assert vocab.position("And") == 0
    with pytest.raises(UnknownLabel):
        vocab.position("Or")


def test_save_load_keeps_fingerprint(tmp_path):
    vocab = NodeVocab(["signal", "And", "const"])
    path = str(tmp_path / "v.txt")
    vocab.save(path)
    loaded = NodeVocab.load(path)
    assert loaded.labels == vocab.labels
    assert loaded.fingerprint == vocab.fingerprint
    assert NodeVocab(["And"]).fingerprint != vocab.fingerprint
