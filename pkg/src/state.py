from typing import TypedDict, List, Dict, Optional

from src.hwgraph.ast import ParseTree
from src.hwgraph.graph import HWGraph
from src.hwgraph.source import FlatDesign, SourceUnit


class Hw2GraphState(TypedDict):
    design: SourceUnit
    kind: str  # AST | DFG
    top: Optional[str]  # --top override
    flat: FlatDesign
    tree: ParseTree
    graph: HWGraph
    debug_logs: List[str]
    step_progress: str  # Current stage name
    metrics: Dict[str, float]  # seconds per stage


class GraphSummaryRow(TypedDict):
    design: str
    kind: str
    nodes: int
    edges: int
    seconds: float
    output: Optional[str]
    error: Optional[str]


class ItemPrediction(TypedDict):
    item: str
    truth: Optional[str]
    score: float
    verdict: str
