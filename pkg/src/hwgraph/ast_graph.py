"""GRAPH_GEN for kind=AST: a preorder walk of the parse tree."""
import logging
from typing import List, Optional, Tuple

from src.errors import ElaborationDepthExceeded
from src.hwgraph.ast import NAMED_KINDS, Node, ParseTree
from src.hwgraph.graph import GraphKind, GraphNode, HWGraph

logger = logging.getLogger(__name__)

MAX_DEPTH = 32


def ast_graph(tree: ParseTree, max_depth: int = MAX_DEPTH) -> HWGraph:
    """One node per parse-tree node, one parent->child edge, ids in DFS preorder.

    Instances of modules declared in the design descend into that module's ModuleDef,
    so a hierarchical design still yields a single rooted tree.
    """
    nodes: List[GraphNode] = []
    edges: List[Tuple[int, int]] = []
    # (node, parent id, instance depth, instance path)
    stack: List[Tuple[Node, Optional[int], int, str]] = [(tree.root, None, 0, tree.top)]
    while stack:
        node, parent, depth, path = stack.pop()
        nid = len(nodes)
        nodes.append(GraphNode(nid, node.kind, node.name if node.kind in NAMED_KINDS else None))
        if parent is not None:
            edges.append((parent, nid))
        children = [(c, nid, depth, path) for c in node.children]
        if node.kind == "Instance" and not node.attrs.get("primitive"):
            sub = tree.modules.get(node.attrs.get("module"))
            if sub is not None:
                sub_path = f"{path}.{node.name}"
                if depth + 1 > max_depth:
                    raise ElaborationDepthExceeded(sub_path, max_depth)
                children.append((sub, nid, depth + 1, sub_path))
        stack.extend(reversed(children))
    logger.debug("AST of %s: %d nodes", tree.design_name or tree.top, len(nodes))
    return HWGraph(GraphKind.AST, nodes, sorted(edges), tree.design_name or tree.top)
