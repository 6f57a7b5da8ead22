import pytest

from src.errors import SchemaViolation
from src.hwgraph.graph import GraphKind, GraphNode, HWGraph, canonicalize, graph_signature

from conftest import AND_MODULE, ast_of, dfg_of


def test_networkx_round_trip():
    g = dfg_of(AND_MODULE)
    back = HWGraph.from_networkx(g.to_networkx())
    assert graph_signature(back) == graph_signature(g)
    assert back.design_name == g.design_name


def test_validate_accepts_extracted_graphs():
    assert ast_of(AND_MODULE).validate()
    assert dfg_of(AND_MODULE).validate()


def test_ast_with_two_roots_is_rejected():
    g = HWGraph(GraphKind.AST, [GraphNode(0, "ModuleDef", "m"), GraphNode(1, "Portlist")], [])
    with pytest.raises(SchemaViolation):
        g.validate()


def test_sparse_ids_are_rejected():
    g = HWGraph(GraphKind.DFG, [GraphNode(0, "signal", "a"), GraphNode(2, "signal", "b")], [])
    with pytest.raises(SchemaViolation) as err:
        g.validate()
    assert err.value.pointer == "/nodes/1/id"


def test_dfg_node_unreachable_from_signals_is_rejected():
    g = HWGraph(GraphKind.DFG, [GraphNode(0, "signal", "a"), GraphNode(1, "And")], [])
    with pytest.raises(SchemaViolation):
        g.validate()


def test_canonicalize_orders_by_preorder_from_roots():
    labels = {"x": ("signal", "x"), "op": ("And", None), "a": ("input", "a"), "b": ("input", "b")}
    children = {"x": ["op"], "op": ["b", "a"]}
    g = canonicalize(GraphKind.DFG, labels, children, ["x"])
    assert [n.name for n in g.nodes] == ["x", None, "b", "a"]
    assert g.keys == ["x", "op", "b", "a"]
