"""Embedding tables, projector files and evaluation reports."""
import logging
import os
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd

from src.data.encode import GraphTensors
from src.graph2vec.model import GnnModel, embed
from src.learnpipe.metrics import EvalReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"  # round-trips float64 exactly


def embedding_frame(model: GnnModel, dataset: Sequence[GraphTensors]) -> pd.DataFrame:
    vectors = np.vstack([embed(model, t) for t in dataset]) if dataset else np.zeros((0, model.embedding_dim))
    frame = pd.DataFrame(vectors, columns=[f"h{i}" for i in range(vectors.shape[1])])
    frame.insert(0, "label", [t.label or "" for t in dataset])
    frame.insert(0, "graph_id", [t.graph_id for t in dataset])
    return frame


def export_embeddings(model: GnnModel, dataset: Sequence[GraphTensors], path: str) -> pd.DataFrame:
    """``graph_id<TAB>label<TAB>h0...`` with one header line, one row per graph."""
    frame = embedding_frame(model, dataset)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    frame.to_csv(path, sep="\t", index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info("Wrote %d embeddings to %s", len(frame), path)
    return frame


def export_projector(model: GnnModel, dataset: Sequence[GraphTensors], out_dir: str) -> Tuple[str, str]:
    """``vectors.tsv`` (no header) plus ``metadata.tsv`` for embedding projectors."""
    frame = embedding_frame(model, dataset)
    os.makedirs(out_dir, exist_ok=True)
    vectors, metadata = os.path.join(out_dir, "vectors.tsv"), os.path.join(out_dir, "metadata.tsv")
    frame.drop(columns=["graph_id", "label"]).to_csv(
        vectors, sep="\t", index=False, header=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
    frame[["graph_id", "label"]].to_csv(metadata, sep="\t", index=False, lineterminator="\n")
    return vectors, metadata


def write_report(report: EvalReport, path: str):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report.to_json())


def read_embeddings(path: str) -> pd.DataFrame:
    return pd.read_csv(path, sep="\t", dtype={"graph_id": str, "label": str}, keep_default_na=False,
                       float_precision="round_trip")


def embedding_columns(frame: pd.DataFrame) -> List[str]:
    return [c for c in frame.columns if c.startswith("h")]
