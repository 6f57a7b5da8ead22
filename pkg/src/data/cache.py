"""Content-addressed on-disk cache of encoded graphs: ``<root>/<sha256(canonical_json + vocab_fp)>.gt``."""
import hashlib
import json
import logging
import os
import tempfile
import zipfile
from typing import Optional

import numpy as np

from src.config import CACHE_DIR
from src.data.encode import GraphTensors
from src.errors import CacheCorrupt
from src.hwgraph.graph import HWGraph
from src.hwgraph.serialize import dumps

logger = logging.getLogger(__name__)

SUFFIX = ".gt"


def cache_key(g: HWGraph, vocab_fp: str) -> str:
    return hashlib.sha256((dumps(g) + vocab_fp).encode("utf-8")).hexdigest()


def _digest(x: np.ndarray, edges: np.ndarray, meta: bytes) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(x, dtype="<f8").tobytes())
    h.update(np.ascontiguousarray(edges, dtype="<i8").tobytes())
    h.update(meta)
    return h.hexdigest()


class GraphCache:
    def __init__(self, root: Optional[str] = None):
        self.root = root or CACHE_DIR
        os.makedirs(self.root, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def path(self, key: str) -> str:
        return os.path.join(self.root, key + SUFFIX)

    def put(self, key: str, tensors: GraphTensors):
        meta = json.dumps(
            {"graph_id": tensors.graph_id, "label": tensors.label, "vocab_fp": tensors.vocab_fp},
            sort_keys=True,
        ).encode("utf-8")
        x = np.ascontiguousarray(tensors.x, dtype="<f8")
        edges = np.ascontiguousarray(tensors.edges, dtype="<i8").reshape(-1, 2)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                np.savez(fh, x=x, edges=edges, meta=np.frombuffer(meta, dtype=np.uint8),
                         digest=np.frombuffer(_digest(x, edges, meta).encode("ascii"), dtype=np.uint8))
            os.replace(tmp, self.path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise

    def get(self, key: str, vocab_fp: Optional[str] = None) -> Optional[GraphTensors]:
        """The cached tensors, or None on a miss (absent, or produced under another vocabulary)."""
        path = self.path(key)
        if not os.path.exists(path):
            self.misses += 1
            return None
        try:
            with np.load(path, allow_pickle=False) as data:
                x, edges = data["x"], data["edges"]
                meta = data["meta"].tobytes()
                digest = data["digest"].tobytes().decode("ascii")
        except (OSError, ValueError, KeyError, EOFError, zipfile.BadZipFile) as e:
            raise CacheCorrupt(path, f"unreadable cache entry ({e})") from e
        if digest != _digest(x, edges, meta):
            raise CacheCorrupt(path, "content hash mismatch")
        info = json.loads(meta.decode("utf-8"))
        if vocab_fp is not None and info["vocab_fp"] != vocab_fp:
            self.misses += 1
            return None
        self.hits += 1
        return GraphTensors(x.astype(np.float64), edges.astype(np.int64).reshape(-1, 2),
                            info["graph_id"], info["label"], info["vocab_fp"])
