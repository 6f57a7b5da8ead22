import json

import pytest

from src.errors import SchemaViolation
from src.hwgraph.serialize import dumps, graph_from_json, graph_to_json, load_graph, save_graph

from conftest import AND_MODULE, dfg_of


def test_four_node_document():
    doc = graph_to_json(dfg_of(AND_MODULE))
    assert doc["kind"] == "DFG"
    assert len(doc["nodes"]) == 4
    assert doc["edges"] == [{"src": 0, "dst": 1}, {"src": 1, "dst": 2}, {"src": 1, "dst": 3}]


def test_canonical_text_is_stable(tmp_path):
    g = dfg_of(AND_MODULE)
    path = tmp_path / "g.json"
    save_graph(g, str(path))
    assert path.read_bytes() == dumps(g).encode("utf-8")
    assert dumps(load_graph(str(path))) == dumps(g)
    assert dumps(g).endswith("}\n")


def test_unknown_kind_points_at_field():
    doc = graph_to_json(dfg_of(AND_MODULE))
    doc["kind"] = "CFG"
    with pytest.raises(SchemaViolation) as err:
        graph_from_json(doc)
    assert err.value.pointer == "/kind"


def test_extra_field_is_rejected():
    doc = graph_to_json(dfg_of(AND_MODULE))
    doc["nodes"][0]["color"] = "red"
    with pytest.raises(SchemaViolation):
        graph_from_json(json.dumps(doc))


def test_dangling_edge_is_rejected():
    doc = graph_to_json(dfg_of(AND_MODULE))
    doc["edges"].append({"src": 0, "dst": 9})
    with pytest.raises(SchemaViolation) as err:
        graph_from_json(doc)
    assert err.value.pointer == "/edges/3/dst"


def test_not_json():
    with pytest.raises(SchemaViolation):
        graph_from_json("{nope")
