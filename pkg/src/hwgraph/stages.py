"""Extraction stages; each is one node of the workflow in src/orchestrator.py."""
import logging
import time

from src.hwgraph.ast_graph import ast_graph
from src.hwgraph.dataflow import dataflow_graph
from src.hwgraph.parser import parse_verilog
from src.hwgraph.source import flatten
from src.state import Hw2GraphState

logger = logging.getLogger(__name__)


class PreProcStage:
    def run(self, state: Hw2GraphState) -> Hw2GraphState:
        logger.info("--- PreProc Stage ---")
        state["step_progress"] = "PreProc"
        start = time.perf_counter()
        design = state["design"]
        flat = flatten(design, state.get("top"))
        state["flat"] = flat
        state["metrics"]["pre_proc"] = time.perf_counter() - start
        state["debug_logs"].append(
            f"Flattened {len(design.files)} file(s) ({design.abstraction.value}); "
            f"top module '{flat.top_module}' among {flat.modules}."
        )
        return state


class ParseStage:
    def run(self, state: Hw2GraphState) -> Hw2GraphState:
        logger.info("--- Parse Stage ---")
        state["step_progress"] = "Parse"
        start = time.perf_counter()
        state["tree"] = parse_verilog(state["flat"])
        state["metrics"]["parse"] = time.perf_counter() - start
        state["debug_logs"].append(f"Parsed {len(state['tree'].modules)} module(s).")
        return state


class AstGenStage:
    def run(self, state: Hw2GraphState) -> Hw2GraphState:
        logger.info("--- AST Graph Stage ---")
        state["step_progress"] = "GraphGen"
        start = time.perf_counter()
        state["graph"] = ast_graph(state["tree"])
        state["metrics"]["graph_gen"] = time.perf_counter() - start
        return state


class DfgGenStage:
    def run(self, state: Hw2GraphState) -> Hw2GraphState:
        logger.info("--- DFG Graph Stage ---")
        state["step_progress"] = "GraphGen"
        start = time.perf_counter()
        tree = state["tree"]
        state["graph"] = dataflow_graph(tree)
        state["metrics"]["graph_gen"] = time.perf_counter() - start
        state["debug_logs"].append(f"Merged {len(tree.dataflow.driven_signals())} signal DFG(s).")
        return state


class PostProcStage:
    def run(self, state: Hw2GraphState) -> Hw2GraphState:
        logger.info("--- PostProc Stage ---")
        state["step_progress"] = "PostProc"
        graph = state["graph"].validate()
        if state["design"].name:
            graph.design_name = state["design"].name
        state["debug_logs"].append(
            f"{graph.kind.value} graph: {graph.num_nodes} nodes, {graph.num_edges} edges."
        )
        return state


pre_proc_stage = PreProcStage()
parse_stage = ParseStage()
ast_gen_stage = AstGenStage()
dfg_gen_stage = DfgGenStage()
post_proc_stage = PostProcStage()
