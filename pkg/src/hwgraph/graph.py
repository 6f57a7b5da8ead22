"""HWGraph: the graph object every extraction stage produces."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx

from src.errors import SchemaViolation


class GraphKind(str, Enum):
    AST = "AST"
    DFG = "DFG"


class GraphNode(NamedTuple):
    id: int
    label: str
    name: Optional[str] = None


# Raw DFG labels that denote signals (normalization keeps input/output, see src.data.normalize).
SIGNAL_LABELS = ("input", "output", "signal")
CONST_LABELS = ("IntConst", "Parameter")


@dataclass
class HWGraph:
    kind: GraphKind
    nodes: List[GraphNode]
    edges: List[Tuple[int, int]]
    design_name: str = ""
    # identity keys used to unify DFG fragments; not part of the serialized form
    keys: List[str] = field(default_factory=list, compare=False, repr=False)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def labels(self) -> List[str]:
        return [n.label for n in self.nodes]

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph(kind=self.kind.value, design=self.design_name)
        for n in self.nodes:
            g.add_node(n.id, label=n.label, name=n.name)
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_networkx(cls, g: nx.DiGraph, kind: Optional[GraphKind] = None,
                      design_name: Optional[str] = None) -> "HWGraph":
        kind = GraphKind(kind or g.graph.get("kind", "DFG"))
        design_name = design_name if design_name is not None else g.graph.get("design", "")
        order = sorted(g.nodes)
        index = {v: i for i, v in enumerate(order)}
        nodes = [GraphNode(index[v], g.nodes[v]["label"], g.nodes[v].get("name")) for v in order]
        edges = sorted((index[s], index[d]) for s, d in g.edges)
        return cls(kind, nodes, edges, design_name)

    def validate(self) -> "HWGraph":
        """Check the structural invariants for this graph kind; returns self."""
        for i, n in enumerate(self.nodes):
            if n.id != i:
                raise SchemaViolation(f"/nodes/{i}/id", f"expected dense id {i}, got {n.id}")
        count = len(self.nodes)
        for i, (s, d) in enumerate(self.edges):
            if not (0 <= s < count and 0 <= d < count):
                raise SchemaViolation(f"/edges/{i}", f"endpoint outside 0..{count - 1}")
        g = self.to_networkx()
        if self.kind == GraphKind.AST:
            if count == 0 or not nx.is_arborescence(g):
                raise SchemaViolation("/edges", "AST is not a rooted tree")
            if next(iter(nx.topological_sort(g))) != 0:
                raise SchemaViolation("/nodes/0", "AST root must be node 0")
        else:
            roots = [n.id for n in self.nodes if n.label in SIGNAL_LABELS] or [0]
            seen = set(roots)
            for r in roots:
                seen |= nx.descendants(g, r)
            if count and len(seen) != count:
                missing = sorted(set(range(count)) - seen)[0]
                raise SchemaViolation(f"/nodes/{missing}", "node unreachable from any signal root")
        return self


def canonicalize(kind: GraphKind, labels: Dict[str, Tuple[str, Optional[str]]],
                 children: Dict[str, List[str]], roots: Sequence[str],
                 design_name: str = "") -> HWGraph:
    """Renumber a keyed graph by DFS preorder from ``roots`` (in the given order).

    ``children`` lists successors per key in their visiting order; nodes not reached from a
    root are appended afterwards in key insertion order.
    """
    order: List[str] = []
    index: Dict[str, int] = {}

    def visit(start: str):
        stack = [start]
        while stack:
            key = stack.pop()
            if key in index:
                continue
            index[key] = len(order)
            order.append(key)
            stack.extend(reversed([c for c in children.get(key, ()) if c not in index]))

    for r in roots:
        visit(r)
    for key in labels:
        visit(key)

    nodes = [GraphNode(i, *labels[k]) for i, k in enumerate(order)]
    edges = sorted({(index[s], index[d]) for s, cs in children.items() for d in cs})
    return HWGraph(kind, nodes, edges, design_name, keys=order)


def graph_signature(g: HWGraph) -> Tuple:
    """Hashable content of a graph (labels, names, edges) for equality checks."""
    return (g.kind.value, tuple((n.label, n.name) for n in g.nodes), tuple(g.edges))
