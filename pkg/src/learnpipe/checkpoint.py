"""
Checkpoint file layout (all integers little-endian)::

    b"GSCKPT"  magic
    u16        format version
    u64        header length in bytes
    header     canonical JSON: version, vocab_fp, arch, params [[name, rows, cols], ...],
               best_metric, metric_name, step, payload_sha256
    payload    each parameter in header order as '<f8' row-major

The node vocabulary is written beside the checkpoint as ``<path>.vocab``.
"""
import hashlib
import json
import logging
import os
import struct
import tempfile
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, NonNegativeInt, PositiveInt, StrictInt, StrictStr, ValidationError

from src.config import ModelConfig
from src.data.vocab import NodeVocab
from src.errors import CorruptFile, VersionMismatch, VocabMismatch
from src.graph2vec.model import GnnModel

logger = logging.getLogger(__name__)

MAGIC = b"GSCKPT"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<6sHQ")


class ArchRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    in_dim: PositiveInt
    head: Literal["classifier", "siamese"]
    seed: StrictInt
    model: ModelConfig


class CheckpointHeader(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: StrictInt
    vocab_fp: StrictStr
    arch: ArchRecord
    params: List[Tuple[StrictStr, NonNegativeInt, NonNegativeInt]]
    best_metric: Optional[float]
    metric_name: StrictStr
    step: NonNegativeInt
    payload_sha256: StrictStr


def vocab_path(path: str) -> str:
    return path + ".vocab"


def _canonical(doc: dict) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True).encode("ascii")


def save_checkpoint(model: GnnModel, path: str, best_metric: Optional[float] = None,
                    metric_name: str = "", step: int = 0, vocab: Optional[NodeVocab] = None):
    params = model.parameters()
    payload = b"".join(np.ascontiguousarray(p.data, dtype="<f8").tobytes() for p in params)
    header = _canonical({
        "version": FORMAT_VERSION,
        "vocab_fp": model.vocab_fp,
        "arch": model.arch(),
        "params": [[p.name, p.shape[0], p.shape[1]] for p in params],
        "best_metric": best_metric,
        "metric_name": metric_name,
        "step": step,
        "payload_sha256": hashlib.sha256(payload).hexdigest(),
    })
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(_PREFIX.pack(MAGIC, FORMAT_VERSION, len(header)))
            fh.write(header)
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    if vocab is not None:
        vocab.save(vocab_path(path))
    logger.info("Saved checkpoint %s (%s=%s at step %d)", path, metric_name or "metric", best_metric, step)


def read_checkpoint(path: str) -> Tuple[dict, bytes]:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as e:
        raise CorruptFile(path, f"cannot read ({e})") from e
    if len(blob) < _PREFIX.size:
        raise CorruptFile(path, "truncated prefix")
    magic, version, header_len = _PREFIX.unpack_from(blob)
    if magic != MAGIC:
        raise CorruptFile(path, "not a checkpoint file")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    start = _PREFIX.size
    if len(blob) < start + header_len:
        raise CorruptFile(path, "truncated header")
    try:
        header = json.loads(blob[start:start + header_len].decode("ascii"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CorruptFile(path, f"unreadable header ({e})") from e
    try:
        header = CheckpointHeader.model_validate(header).model_dump()
    except ValidationError as e:
        first = e.errors()[0]
        where = "/".join(str(part) for part in first["loc"])
        raise CorruptFile(path, f"malformed header at {where or '/'}: {first['msg']}") from e
    payload = blob[start + header_len:]
    expected = 8 * sum(rows * cols for _, rows, cols in header["params"])
    if len(payload) != expected:
        raise CorruptFile(path, f"payload has {len(payload)} bytes, expected {expected}")
    if hashlib.sha256(payload).hexdigest() != header["payload_sha256"]:
        raise CorruptFile(path, "payload hash mismatch")
    return header, payload


def load_checkpoint(path: str, vocab_fp: Optional[str] = None) -> GnnModel:
    """Rebuild the model; ``vocab_fp`` (or the saved vocabulary beside the file) must match the header."""
    header, payload = read_checkpoint(path)
    if vocab_fp is None and os.path.exists(vocab_path(path)):
        vocab_fp = NodeVocab.load(vocab_path(path)).fingerprint
    if vocab_fp is not None and vocab_fp != header["vocab_fp"]:
        raise VocabMismatch(header["vocab_fp"], vocab_fp, "the checkpoint was trained on a different label set")

    arch = header["arch"]
    model = GnnModel(arch["in_dim"], ModelConfig(**arch["model"]), arch["head"], arch["seed"], header["vocab_fp"])
    named = model.named_parameters()
    offset = 0
    for name, rows, cols in header["params"]:
        if name not in named or named[name].shape != (rows, cols):
            raise CorruptFile(path, f"parameter '{name}' does not fit the recorded architecture")
        size = rows * cols * 8
        named[name].data = np.frombuffer(payload, dtype="<f8", count=rows * cols, offset=offset) \
            .astype(np.float64).reshape(rows, cols)
        offset += size
    if len(header["params"]) != len(named):
        raise CorruptFile(path, "parameter count does not match the architecture")
    return model


def load_vocab(path: str) -> NodeVocab:
    vp = vocab_path(path)
    if not os.path.exists(vp):
        raise CorruptFile(vp, "vocabulary file missing beside the checkpoint")
    return NodeVocab.load(vp)
