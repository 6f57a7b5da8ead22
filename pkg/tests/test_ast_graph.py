import os

import networkx as nx
import pytest

from src.errors import ElaborationDepthExceeded
from src.hwgraph.ast_graph import ast_graph
from src.hwgraph.graph import GraphKind
from src.hwgraph.source import SourceUnit
from src.orchestrator import hw2graph

from conftest import AND_MODULE, ast_of, parse


def test_ast_is_a_rooted_tree():
    g = ast_of(AND_MODULE)
    assert g.kind == GraphKind.AST
    assert g.num_edges == g.num_nodes - 1
    assert nx.is_arborescence(g.to_networkx())
    assert g.nodes[0].label == "ModuleDef" and g.nodes[0].name == "m"


def test_ids_follow_preorder():
    g = ast_of(AND_MODULE)
    # every parent precedes its children
    assert all(s < d for s, d in g.edges)
    labels = g.labels()
    assert labels.index("Assign") < labels.index("And")


def test_names_only_on_named_kinds():
    g = ast_of(AND_MODULE)
    named = {n.label for n in g.nodes if n.name is not None}
    assert "Identifier" in named
    assert "And" not in named and "Assign" not in named


def test_instances_descend_into_submodules():
    text = (
        "module leaf(input a, output b); assign b = ~a; endmodule\n"
        "module top(input x, output y); wire t; leaf u1(.a(x), .b(t)); leaf u2(.a(t), .b(y)); endmodule\n"
    )
    g = ast_of(text)
    assert [n.name for n in g.nodes if n.label == "ModuleDef"] == ["top", "leaf", "leaf"]
    assert nx.is_arborescence(g.to_networkx())


def test_recursive_instantiation_hits_depth_limit():
    text = (
        "module loop(input a, output b); loop u(.a(a), .b(b)); endmodule\n"
        "module top(input x, output y); loop u0(.a(x), .b(y)); endmodule\n"
    )
    with pytest.raises(ElaborationDepthExceeded):
        ast_graph(parse(text), max_depth=4)


def test_bundled_designs_are_trees(designs_dir):
    for name in sorted(os.listdir(designs_dir)):
        g = hw2graph(SourceUnit.from_directory(os.path.join(designs_dir, name)), "AST")
        assert g.num_edges == g.num_nodes - 1, name
        assert g.design_name == name
