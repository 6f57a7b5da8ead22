from typing import Optional, Union

from langgraph.graph import StateGraph, END
from src.state import Hw2GraphState
from src.hwgraph.graph import GraphKind, HWGraph
from src.hwgraph.source import SourceUnit
from src.hwgraph.stages import (
    pre_proc_stage,
    parse_stage,
    ast_gen_stage,
    dfg_gen_stage,
    post_proc_stage,
)

def run_pre_proc(state: Hw2GraphState):
    return pre_proc_stage.run(state)

def run_parse(state: Hw2GraphState):
    return parse_stage.run(state)

def run_ast_gen(state: Hw2GraphState):
    return ast_gen_stage.run(state)

def run_dfg_gen(state: Hw2GraphState):
    return dfg_gen_stage.run(state)

def run_post_proc(state: Hw2GraphState):
    return post_proc_stage.run(state)

def route_graph_kind(state: Hw2GraphState) -> str:
    return "ast_gen" if state["kind"] == GraphKind.AST.value else "dfg_gen"

# Define the graph
workflow = StateGraph(Hw2GraphState)

# Add nodes
workflow.add_node("pre_proc", run_pre_proc)
workflow.add_node("parse", run_parse)
workflow.add_node("ast_gen", run_ast_gen)
workflow.add_node("dfg_gen", run_dfg_gen)
workflow.add_node("post_proc", run_post_proc)

# Define edges
workflow.set_entry_point("pre_proc")
workflow.add_edge("pre_proc", "parse")
workflow.add_conditional_edges("parse", route_graph_kind, {"ast_gen": "ast_gen", "dfg_gen": "dfg_gen"})
workflow.add_edge("ast_gen", "post_proc")
workflow.add_edge("dfg_gen", "post_proc")
workflow.add_edge("post_proc", END)

# Compile
app = workflow.compile()


def run_hw2graph(design: SourceUnit, kind: Union[GraphKind, str], top: Optional[str] = None) -> Hw2GraphState:
    """Run the full extraction workflow and return its final state (graph, logs, stage timings)."""
    kind = GraphKind(kind.upper() if isinstance(kind, str) else kind)
    return app.invoke({
        "design": design,
        "kind": kind.value,
        "top": top,
        "debug_logs": [],
        "step_progress": "",
        "metrics": {},
    })


def hw2graph(design: SourceUnit, kind: Union[GraphKind, str], top: Optional[str] = None) -> HWGraph:
    return run_hw2graph(design, kind, top)["graph"]
