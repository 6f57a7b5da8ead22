import os

import numpy as np
import pytest

from src.data.encode import GraphTensors
from src.hwgraph.ast_graph import ast_graph
from src.hwgraph.dataflow import dataflow_graph
from src.hwgraph.parser import parse_verilog
from src.hwgraph.source import SourceUnit, flatten

DESIGNS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "designs")

AND_MODULE = "module m(input a, input b, output c);\n  assign c = a & b;\nendmodule\n"


def parse(text, top=None):
    return parse_verilog(flatten(SourceUnit.from_text(text, name="t"), top))


def dfg_of(text, top=None):
    return dataflow_graph(parse(text, top))


def ast_of(text, top=None):
    return ast_graph(parse(text, top))


def by_name(g):
    return {n.name: n for n in g.nodes if n.name is not None}


@pytest.fixture
def designs_dir():
    return DESIGNS_DIR


@pytest.fixture
def write_design(tmp_path):
    """Create ``<tmp>/<name>/<file>`` for each ``{file: text}`` and return the design directory."""
    def _write(name, files):
        root = tmp_path / name
        root.mkdir(parents=True, exist_ok=True)
        for fname, text in files.items():
            (root / fname).write_text(text, encoding="utf-8")
        return str(root)
    return _write


def toy_tensors(graph_id, x, edges, label=None, vocab_fp=""):
    """GraphTensors straight from a feature matrix and an edge list."""
    return GraphTensors(np.asarray(x, dtype=np.float64), np.asarray(edges, dtype=np.int64).reshape(-1, 2),
                        graph_id, label, vocab_fp)


def star(graph_id, n, label=None):
    """Hub (feature [1, 0]) wired to n - 1 leaves (feature [0, 1])."""
    x = [[1.0, 0.0]] + [[0.0, 1.0]] * (n - 1)
    return toy_tensors(graph_id, x, [[0, i] for i in range(1, n)], label)


def chain(graph_id, n, label=None):
    """Path whose first node carries the hub feature, so feature counts match a star of the same size."""
    x = [[1.0, 0.0]] + [[0.0, 1.0]] * (n - 1)
    return toy_tensors(graph_id, x, [[i, i + 1] for i in range(n - 1)], label)


def random_tensors(rng, n, dim, p_edge=0.3, graph_id="g"):
    """Continuous random features (no score ties) on a random directed graph."""
    edges = [[s, d] for s in range(n) for d in range(n) if s != d and rng.random() < p_edge]
    return toy_tensors(graph_id, rng.normal(size=(n, dim)), edges)
