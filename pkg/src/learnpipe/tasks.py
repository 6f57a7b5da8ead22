"""
The end-to-end use-cases: graph extraction, embedding, Trojan detection and piracy detection.

Each function takes a validated RunConfig, writes its artifacts under ``paths.output_dir`` and
returns the structured result the command line renders.
"""
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from src.config import RunConfig
from src.data.cache import GraphCache
from src.data.corpus import CorpusItem, load_corpus
from src.data.encode import GraphTensors
from src.data.splits import leave_one_circuit_out, make_pairs, split
from src.data.vocab import NodeVocab, build_vocab
from src.errors import ConfigError, EmptyCorpus, GateSightError, WrongHead
from src.hwgraph.serialize import save_graph
from src.learnpipe.checkpoint import load_checkpoint, load_vocab
from src.learnpipe.dataset import Extraction, encode_graphs, extract_designs, normalized
from src.learnpipe.decision import predict_ht, predict_piracy
from src.learnpipe.export import export_embeddings, export_projector, write_report
from src.learnpipe.metrics import EvalReport, mean_report
from src.learnpipe.trainer import TrainResult, train_graph_classifier, train_pair_model, write_history
from src.model_factory import get_model
from src.state import GraphSummaryRow, ItemPrediction

logger = logging.getLogger(__name__)

CHECKPOINT = "model.ckpt"
REPORT = "report.json"
HISTORY = "loss_history.csv"
SUMMARY = "summary.csv"


@dataclass
class TaskOutcome:
    rows: List[dict] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)
    report: Optional[EvalReport] = None
    artifacts: Dict[str, str] = field(default_factory=dict)


def checkpoint_path(cfg: RunConfig) -> str:
    return cfg.paths.checkpoint or os.path.join(cfg.paths.output_dir, CHECKPOINT)


def _design_name(path: str) -> str:
    return os.path.basename(os.path.normpath(path))


def _extract(designs: Sequence[Tuple[str, str]], cfg: RunConfig, outcome: TaskOutcome) -> Dict[str, Extraction]:
    results = extract_designs(designs, cfg.graph_kind, cfg.top, cfg.workers)
    for r in results:
        if not r.ok:
            outcome.failures.append(f"{r.name}: {r.error}")
    return {r.name: r for r in results}


def _cache(cfg: RunConfig) -> Optional[GraphCache]:
    return GraphCache(cfg.paths.cache_dir) if cfg.paths.cache_dir else None


# --- graph -------------------------------------------------------------------

def extract_to_json(inputs: Sequence[str], cfg: RunConfig) -> TaskOutcome:
    """One ``<design>.json`` per input directory plus ``summary.csv`` with a mean row."""
    if not inputs:
        raise ConfigError("no design directories given")
    outcome = TaskOutcome()
    out_dir = cfg.paths.output_dir
    os.makedirs(out_dir, exist_ok=True)
    results = _extract([(_design_name(p), p) for p in inputs], cfg, outcome)
    for name, r in results.items():
        row = GraphSummaryRow(design=name, kind=cfg.graph_kind, nodes=0, edges=0,
                              seconds=round(r.seconds, 6), output=None, error=r.error)
        if r.ok:
            path = os.path.join(out_dir, f"{name}.json")
            save_graph(r.graph, path)
            row.update(nodes=r.graph.num_nodes, edges=r.graph.num_edges, output=path)
        outcome.rows.append(dict(row))

    frame = pd.DataFrame(outcome.rows, columns=list(GraphSummaryRow.__annotations__))
    ok = frame[frame["error"].isna()]
    if len(ok):
        mean = {"design": "mean", "kind": cfg.graph_kind, "nodes": ok["nodes"].mean(),
                "edges": ok["edges"].mean(), "seconds": ok["seconds"].mean(), "output": None, "error": None}
        frame = pd.concat([frame, pd.DataFrame([mean])], ignore_index=True)
    summary = os.path.join(out_dir, SUMMARY)
    frame.to_csv(summary, index=False, lineterminator="\n")
    outcome.artifacts["summary"] = summary
    return outcome


# --- shared corpus preparation -----------------------------------------------

def _prepare_corpus(cfg: RunConfig, outcome: TaskOutcome) -> Tuple[List[CorpusItem], NodeVocab, Dict[str, GraphTensors]]:
    if not cfg.paths.corpus:
        raise ConfigError("paths.corpus is required for training")
    items = load_corpus(cfg.paths.corpus, cfg.paths.labels)
    results = _extract([(i.name, i.path) for i in items], cfg, outcome)
    graphs = {name: r.graph for name, r in results.items() if r.ok}
    if not graphs:
        raise EmptyCorpus(f"no design under {cfg.paths.corpus} produced a graph")
    vocab = build_vocab(normalized(graphs.values()))
    items = [i for i in items if i.name in graphs]
    tensors = encode_graphs(graphs, vocab, {i.name: i.label for i in items}, _cache(cfg))
    logger.info("Corpus ready: %d graphs, %d node labels", len(tensors), len(vocab))
    return items, vocab, tensors


def _finish(result: TrainResult, out_dir: str, outcome: TaskOutcome):
    report_path = os.path.join(out_dir, REPORT)
    history_path = os.path.join(out_dir, HISTORY)
    write_report(result.report, report_path)
    write_history(result.history, history_path)
    outcome.report = result.report
    outcome.rows = result.report.per_item
    outcome.artifacts.update(report=report_path, history=history_path)


# --- Trojan detection --------------------------------------------------------

def _train_ht_fold(cfg: RunConfig, vocab: NodeVocab, train: List[GraphTensors], test: List[GraphTensors],
                   ckpt: str, outcome: TaskOutcome) -> TrainResult:
    out_dir = os.path.dirname(os.path.abspath(ckpt))
    os.makedirs(out_dir, exist_ok=True)
    model = get_model(len(vocab), cfg.model, "classifier", cfg.train.seed, vocab.fingerprint)
    result = train_graph_classifier(model, train, test, cfg.train, ckpt, vocab)
    outcome.artifacts["checkpoint"] = ckpt
    _finish(result, out_dir, outcome)
    return result


def train_ht(cfg: RunConfig) -> TaskOutcome:
    """Train the Trojan classifier; ``leave_out`` holds out one base circuit, ``'*'`` cross-validates."""
    outcome = TaskOutcome()
    items, vocab, tensors = _prepare_corpus(cfg, outcome)
    ids = [i.name for i in items]

    if cfg.leave_out == "*":
        return _cross_validate_ht(cfg, items, vocab, tensors, outcome)
    if cfg.leave_out:
        ds = leave_one_circuit_out(ids, {i.name: i.circuit for i in items}, cfg.leave_out)
    else:
        ds = split(ids, cfg.train.test_ratio, cfg.train.seed)
    logger.info("Split: %d train / %d test%s", len(ds.train), len(ds.test),
                f" (held out {ds.held_out})" if ds.held_out else "")
    _train_ht_fold(cfg, vocab, [tensors[n] for n in ds.train], [tensors[n] for n in ds.test],
                   checkpoint_path(cfg), outcome)
    return outcome


def _cross_validate_ht(cfg: RunConfig, items: List[CorpusItem], vocab: NodeVocab,
                       tensors: Dict[str, GraphTensors], outcome: TaskOutcome) -> TaskOutcome:
    ids = [i.name for i in items]
    circuit_of = {i.name: i.circuit for i in items}
    folds = []
    for circuit in sorted(set(circuit_of.values())):
        ds = leave_one_circuit_out(ids, circuit_of, circuit)
        logger.info("--- Fold %s: %d train / %d test ---", circuit, len(ds.train), len(ds.test))
        fold_out = TaskOutcome()
        result = _train_ht_fold(cfg, vocab, [tensors[n] for n in ds.train], [tensors[n] for n in ds.test],
                                os.path.join(cfg.paths.output_dir, "folds", circuit, CHECKPOINT), fold_out)
        folds.append((circuit, result.report))

    rows = [{"held_out": c, "precision": r.precision, "recall": r.recall, "f1": r.f1, "accuracy": r.accuracy}
            for c, r in folds]
    rows.append({"held_out": "mean", **mean_report([r for _, r in folds])})
    path = os.path.join(cfg.paths.output_dir, "crossval.csv")
    pd.DataFrame(rows).to_csv(path, index=False, lineterminator="\n")
    outcome.rows = rows
    outcome.artifacts["crossval"] = path
    return outcome


def _load_for_inference(cfg: RunConfig, head: str):
    ckpt = checkpoint_path(cfg)
    vocab = load_vocab(ckpt)
    model = load_checkpoint(ckpt, vocab.fingerprint)
    if model.head != head:
        raise WrongHead(head, model.head)
    return model, vocab


def _encode_inputs(inputs: Sequence[str], cfg: RunConfig, vocab: NodeVocab,
                   outcome: TaskOutcome) -> Dict[str, GraphTensors]:
    results = _extract([(_design_name(p), p) for p in inputs], cfg, outcome)
    tensors = {}
    for name, r in results.items():
        if not r.ok:
            continue
        try:
            tensors.update(encode_graphs({name: r.graph}, vocab, cache=_cache(cfg)))
        except GateSightError as e:
            outcome.failures.append(f"{name}: {type(e).__name__}: {e}")
    return tensors


def infer_ht(cfg: RunConfig, inputs: Sequence[str]) -> TaskOutcome:
    if not inputs:
        raise ConfigError("no design directories given")
    outcome = TaskOutcome()
    model, vocab = _load_for_inference(cfg, "classifier")
    for name, t in _encode_inputs(inputs, cfg, vocab, outcome).items():
        verdict, probs = predict_ht(model, t)
        outcome.rows.append(dict(ItemPrediction(item=name, truth=None, score=float(probs[0]), verdict=verdict)))
    return outcome


# --- IP piracy detection -----------------------------------------------------

def train_ip(cfg: RunConfig) -> TaskOutcome:
    """Siamese training over every design pair; pairs sharing a manifest category are similar."""
    outcome = TaskOutcome()
    items, vocab, tensors = _prepare_corpus(cfg, outcome)
    pairs = make_pairs([i.name for i in items], {i.name: i.label for i in items})
    ds = split(list(range(len(pairs))), cfg.train.test_ratio, cfg.train.seed)
    train_pairs, test_pairs = [pairs[i] for i in ds.train], [pairs[i] for i in ds.test]
    logger.info("Pairs: %d train / %d test", len(train_pairs), len(test_pairs))

    out_dir = os.path.dirname(os.path.abspath(checkpoint_path(cfg)))
    os.makedirs(out_dir, exist_ok=True)
    model = get_model(len(vocab), cfg.model, "siamese", cfg.train.seed, vocab.fingerprint)
    ckpt = checkpoint_path(cfg)
    result = train_pair_model(model, tensors, train_pairs, test_pairs, cfg.train, ckpt, vocab)
    outcome.artifacts["checkpoint"] = ckpt
    _finish(result, out_dir, outcome)
    return outcome


def infer_ip(cfg: RunConfig, design_a: str, design_b: str) -> TaskOutcome:
    outcome = TaskOutcome()
    model, vocab = _load_for_inference(cfg, "siamese")
    tensors = _encode_inputs([design_a, design_b], cfg, vocab, outcome)
    a, b = _design_name(design_a), _design_name(design_b)
    if a == b and a in tensors:
        t1 = t2 = tensors[a]
    elif a in tensors and b in tensors:
        t1, t2 = tensors[a], tensors[b]
    else:
        return outcome
    try:
        verdict, similarity = predict_piracy(model, t1, t2, cfg.train.delta)
    except GateSightError as e:
        outcome.failures.append(f"{a}|{b}: {type(e).__name__}: {e}")
        return outcome
    outcome.rows.append(dict(ItemPrediction(item=f"{a}|{b}", truth=None, score=similarity, verdict=verdict)))
    return outcome


# --- embedding ---------------------------------------------------------------

def embed_designs(cfg: RunConfig, inputs: Sequence[str], projector: bool = False) -> TaskOutcome:
    """Embedding TSV for the given designs (or the whole corpus when none are given)."""
    if not inputs and not cfg.paths.corpus:
        raise ConfigError("give design directories or set paths.corpus")
    outcome = TaskOutcome()
    ckpt = checkpoint_path(cfg)
    vocab = load_vocab(ckpt)
    model = load_checkpoint(ckpt, vocab.fingerprint)
    labels: Dict[str, Optional[str]] = {}
    if not inputs:
        items = load_corpus(cfg.paths.corpus, cfg.paths.labels, require_labels=False)
        inputs = [i.path for i in items]
        labels = {i.name: i.label for i in items}
    tensors = _encode_inputs(inputs, cfg, vocab, outcome)
    for name, t in tensors.items():
        t.label = labels.get(name)
    dataset = list(tensors.values())
    path = os.path.join(cfg.paths.output_dir, "embeddings.tsv")
    frame = export_embeddings(model, dataset, path)
    outcome.artifacts["embeddings"] = path
    if projector:
        vectors, metadata = export_projector(model, dataset, os.path.join(cfg.paths.output_dir, "projector"))
        outcome.artifacts.update(vectors=vectors, metadata=metadata)
    outcome.rows = frame[["graph_id", "label"]].to_dict("records")
    return outcome

