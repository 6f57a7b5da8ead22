import pytest

from src.data.normalize import normalize, normalize_label
from src.errors import UnknownLabel
from src.hwgraph.graph import GraphKind, GraphNode, HWGraph

from conftest import AND_MODULE, ast_of, dfg_of


def test_dfg_literals_become_const_and_names_drop():
    g = normalize(dfg_of("module m(input [7:0] a, output [7:0] y, output z);\n"
                         "  assign z = a == 1'b0;\n  assign y = a & 8'hFF;\nendmodule"))
    assert g.labels().count("const") == 2
    assert all(n.name is None for n in g.nodes)


def test_signal_roles_are_kept():
    g = normalize(dfg_of(AND_MODULE))
    assert g.labels() == ["output", "And", "input", "input"]


def test_ast_labels_unchanged():
    raw = ast_of(AND_MODULE)
    assert normalize(raw).labels() == raw.labels()
    assert normalize(raw).edges == raw.edges


def test_unknown_label():
    with pytest.raises(UnknownLabel):
        normalize(HWGraph(GraphKind.DFG, [GraphNode(0, "Teleport")], []))
    with pytest.raises(UnknownLabel):
        normalize_label(GraphKind.AST, "const")
