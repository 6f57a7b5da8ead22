from src.errors import UnknownLabel
from src.hwgraph.ast import AST_LABELS
from src.hwgraph.dataflow import DFG_OPERATOR_LABELS
from src.hwgraph.graph import CONST_LABELS, SIGNAL_LABELS, GraphKind, GraphNode, HWGraph

# Normalized DFG label set, fixed ahead of any corpus.
DFG_LABELS = frozenset(SIGNAL_LABELS) | {"const"} | DFG_OPERATOR_LABELS


def normalize_label(kind: GraphKind, label: str) -> str:
    if kind == GraphKind.AST:
        if label in AST_LABELS:
            return label
    elif label in CONST_LABELS:
        return "const"
    elif label in DFG_LABELS:
        return label
    raise UnknownLabel(label, f"{kind.value} graph")


def normalize(g: HWGraph) -> HWGraph:
    """Map raw labels onto the fixed vocabulary and drop identifier/literal names."""
    nodes = [GraphNode(n.id, normalize_label(g.kind, n.label), None) for n in g.nodes]
    return HWGraph(g.kind, nodes, list(g.edges), g.design_name)
