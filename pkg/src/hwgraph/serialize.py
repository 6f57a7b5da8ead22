"""Canonical JSON form of an HWGraph (sorted ids, sorted edges, 2-space indent, LF)."""
import json
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, StrictInt, StrictStr, ValidationError

from src.errors import SchemaViolation
from src.hwgraph.graph import GraphKind, GraphNode, HWGraph


class NodeRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: StrictInt
    label: StrictStr
    name: Optional[StrictStr]


class EdgeRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    src: StrictInt
    dst: StrictInt


class GraphDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    design: StrictStr
    kind: Literal["AST", "DFG"]
    nodes: List[NodeRecord]
    edges: List[EdgeRecord]


def graph_to_json(g: HWGraph) -> dict:
    return {
        "design": g.design_name,
        "kind": g.kind.value,
        "nodes": [{"id": n.id, "label": n.label, "name": n.name} for n in sorted(g.nodes)],
        "edges": [{"src": s, "dst": d} for s, d in sorted(g.edges)],
    }


def dumps(g: HWGraph) -> str:
    return json.dumps(graph_to_json(g), indent=2, ensure_ascii=False) + "\n"


def _pointer(loc) -> str:
    return "/" + "/".join(str(part) for part in loc)


def graph_from_json(doc: Union[dict, str, bytes]) -> HWGraph:
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise SchemaViolation("", f"not JSON: {e}") from e
    try:
        parsed = GraphDocument.model_validate(doc)
    except ValidationError as e:
        first = e.errors()[0]
        raise SchemaViolation(_pointer(first["loc"]), first["msg"]) from e

    for i, n in enumerate(parsed.nodes):
        if n.id != i:
            raise SchemaViolation(f"/nodes/{i}/id", f"expected {i} (ids must be dense and sorted)")
    count = len(parsed.nodes)
    for i, e in enumerate(parsed.edges):
        for end in ("src", "dst"):
            if not 0 <= getattr(e, end) < count:
                raise SchemaViolation(f"/edges/{i}/{end}", "refers to a missing node")
    return HWGraph(
        kind=GraphKind(parsed.kind),
        nodes=[GraphNode(n.id, n.label, n.name) for n in parsed.nodes],
        edges=sorted((e.src, e.dst) for e in parsed.edges),
        design_name=parsed.design,
    )


def save_graph(g: HWGraph, path: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(g))


def load_graph(path: str) -> HWGraph:
    with open(path, encoding="utf-8") as fh:
        return graph_from_json(fh.read())
