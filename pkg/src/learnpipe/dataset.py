"""
Dataset processor: designs on disk -> normalized graphs -> encoded tensors.

Extraction fans out over a process pool; workers return error text rather than exception
objects so failures cross the process boundary intact.
"""
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from src.data.cache import GraphCache, cache_key
from src.data.encode import GraphTensors, encode
from src.data.normalize import normalize
from src.data.vocab import NodeVocab
from src.errors import GateSightError
from src.hwgraph.graph import HWGraph
from src.hwgraph.source import SourceUnit
from src.orchestrator import hw2graph

logger = logging.getLogger(__name__)


@dataclass
class Extraction:
    name: str
    graph: Optional[HWGraph]
    error: Optional[str]
    seconds: float

    @property
    def ok(self) -> bool:
        return self.graph is not None


def extract_design(name: str, path: str, kind: str, top: Optional[str] = None) -> Extraction:
    start = time.perf_counter()
    try:
        unit = SourceUnit.from_directory(path)
        unit.name = name
        graph = hw2graph(unit, kind, top)
    except (GateSightError, OSError) as e:
        return Extraction(name, None, f"{type(e).__name__}: {e}", time.perf_counter() - start)
    return Extraction(name, graph, None, time.perf_counter() - start)


def _extract_star(args: Tuple[str, str, str, Optional[str]]) -> Extraction:
    return extract_design(*args)


def extract_designs(designs: Sequence[Tuple[str, str]], kind: str, top: Optional[str] = None,
                    workers: int = 0) -> List[Extraction]:
    """Extract ``(name, directory)`` designs in input order; ``workers`` 0 means one per CPU."""
    jobs = [(name, path, kind, top) for name, path in designs]
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(jobs) <= 1:
        results = [_extract_star(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_extract_star, jobs))
    for r in results:
        if r.ok:
            logger.debug("%s: %d nodes in %.3fs", r.name, r.graph.num_nodes, r.seconds)
        else:
            logger.warning("%s: %s", r.name, r.error)
    return results


def encode_graphs(graphs: Mapping[str, HWGraph], vocab: NodeVocab, labels: Optional[Mapping[str, str]] = None,
                  cache: Optional[GraphCache] = None) -> Dict[str, GraphTensors]:
    """Normalize and one-hot encode each graph, reading through the cache when one is given."""
    labels = labels or {}
    out = {}
    for name, g in graphs.items():
        norm = normalize(g)
        key = cache_key(norm, vocab.fingerprint) if cache else None
        tensors = cache.get(key, vocab.fingerprint) if cache else None
        if tensors is None:
            tensors = encode(norm, vocab, name)
            if cache:
                cache.put(key, tensors)
        tensors.graph_id, tensors.label = name, labels.get(name)
        out[name] = tensors
    return out


def normalized(graphs: Iterable[HWGraph]) -> List[HWGraph]:
    return [normalize(g) for g in graphs]
