"""
Graph trainer (Trojan classification) and graph-pair trainer (piracy similarity).

Both run mini-step testing: the held-out split is evaluated before the first step, every
``mini_test_interval`` optimizer steps and after the last step. A strictly better metric
replaces the cached best weights (and the checkpoint file, when one is configured); at the
end the model is left holding the best weights.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.config import TrainConfig
from src.data.encode import GraphTensors
from src.data.splits import SIMILAR, GraphPair
from src.data.vocab import NodeVocab
from src.errors import BadLabel, Divergence, NonFinite, ZeroVector
from src.graph2vec.model import GnnModel
from src.learnpipe.checkpoint import save_checkpoint
from src.learnpipe.decision import (
    CLASS_LABELS,
    PIRACY_LABEL,
    NON_PIRACY_LABEL,
    TROJAN_LABEL,
    ht_verdict,
    piracy_verdict,
)
from src.learnpipe.losses import contrastive_loss, cross_entropy
from src.learnpipe.metrics import EvalReport, compute_metrics, confusion
from src.nncore.ops import add, cosine
from src.nncore.optim import SGD, Adam, Optimizer
from src.nncore.tensor import backward

logger = logging.getLogger(__name__)


@dataclass
class TrainResult:
    best_metric: float
    best_step: int
    report: EvalReport  # evaluation of the best weights
    history: List[dict] = field(default_factory=list)
    final_loss: Optional[float] = None


def make_optimizer(model: GnnModel, cfg: TrainConfig) -> Optimizer:
    if cfg.optimizer == "sgd":
        return SGD(model.parameters(), cfg.lr)
    return Adam(model.parameters(), cfg.lr, cfg.beta1, cfg.beta2, cfg.eps)


def onehot(label: str) -> np.ndarray:
    if label not in CLASS_LABELS:
        raise BadLabel(label)
    row = np.zeros((1, len(CLASS_LABELS)))
    row[0, CLASS_LABELS.index(label)] = 1.0
    return row


def write_history(history: Sequence[dict], path: str):
    pd.DataFrame(list(history), columns=["step", "epoch", "loss", "metric"]).to_csv(
        path, index=False, lineterminator="\n"
    )


class _Trainer:
    metric_name = ""

    def __init__(self, model: GnnModel, cfg: TrainConfig, checkpoint_path: Optional[str] = None,
                 vocab: Optional[NodeVocab] = None):
        self.model = model
        self.cfg = cfg
        self.checkpoint_path = checkpoint_path
        self.vocab = vocab
        self.rng = np.random.default_rng(cfg.seed)
        self.optimizer = make_optimizer(model, cfg)
        self.history: List[dict] = []
        self.best_metric = -math.inf
        self.best_step = 0
        self.best_report: Optional[EvalReport] = None
        self._best_weights: Dict[str, np.ndarray] = {}

    # subclasses provide these
    def batches(self) -> List[list]:
        raise NotImplementedError

    def batch_loss(self, batch: list):
        raise NotImplementedError

    def evaluate(self) -> EvalReport:
        raise NotImplementedError

    def _mini_test(self, step: int, epoch: int, loss: Optional[float]):
        report = self.evaluate()
        metric = report.metric(self.metric_name)
        self.history.append({"step": step, "epoch": epoch, "loss": loss, "metric": metric})
        logger.info("step %d epoch %d loss %s %s %.4f", step, epoch,
                    "-" if loss is None else f"{loss:.4f}", self.metric_name, metric)
        if metric > self.best_metric:
            self.best_metric, self.best_step, self.best_report = metric, step, report
            self._best_weights = {n: p.data.copy() for n, p in self.model.named_parameters().items()}
            if self.checkpoint_path:
                save_checkpoint(self.model, self.checkpoint_path, metric, self.metric_name, step, self.vocab)

    def train(self) -> TrainResult:
        logger.info("--- Training (%s head, %d epochs) ---", self.model.head, self.cfg.epochs)
        step, last_loss = 0, None
        self._mini_test(step, 0, None)
        for epoch in range(1, self.cfg.epochs + 1):
            for batch in self.batches():
                self.optimizer.zero_grad()
                try:
                    loss = self.batch_loss(batch)
                    if loss is None:
                        continue
                    backward(loss)
                except NonFinite:
                    raise Divergence(step + 1, last_loss) from None
                self.optimizer.step()
                step += 1
                last_loss = loss.item()
                if step % self.cfg.mini_test_interval == 0:
                    self._mini_test(step, epoch, last_loss)
        if step % self.cfg.mini_test_interval != 0:
            self._mini_test(step, self.cfg.epochs, last_loss)

        for name, p in self.model.named_parameters().items():
            p.data = self._best_weights[name].copy()
        logger.info("Best %s %.4f at step %d", self.metric_name, self.best_metric, self.best_step)
        return TrainResult(self.best_metric, self.best_step, self.best_report, self.history, last_loss)


class GraphTrainer(_Trainer):
    """Minimizes batch cross-entropy; the best weights are chosen by test F1 (positive class Trojan)."""

    metric_name = "f1"

    def __init__(self, model: GnnModel, train: Sequence[GraphTensors], test: Sequence[GraphTensors],
                 cfg: TrainConfig, checkpoint_path: Optional[str] = None, vocab: Optional[NodeVocab] = None):
        super().__init__(model, cfg, checkpoint_path, vocab)
        if not train or not test:
            raise ValueError("training and test splits must both be nonempty")
        self.train_set = list(train)
        self.test_set = list(test)
        self.targets = {t.graph_id: onehot(t.label) for t in self.train_set}

    def batches(self) -> List[list]:
        order = self.rng.permutation(len(self.train_set))
        size = self.cfg.batch_size
        return [[self.train_set[i] for i in order[s:s + size]] for s in range(0, len(order), size)]

    def batch_loss(self, batch: List[GraphTensors]):
        loss = None
        for t in batch:
            probs = self.model.class_probs(self.model.embed_tensor(t))
            term = cross_entropy(probs, self.targets[t.graph_id])
            loss = term if loss is None else add(loss, term)
        return loss

    def evaluate(self) -> EvalReport:
        items = []
        for t in self.test_set:
            probs = self.model.class_probs(self.model.embed_tensor(t)).data.reshape(-1)
            items.append({"item": t.graph_id, "truth": t.label, "score": float(probs[0]),
                          "verdict": ht_verdict(probs)})
        counts = confusion([i["truth"] for i in items], [i["verdict"] for i in items], TROJAN_LABEL)
        return compute_metrics(counts, items)


class PairTrainer(_Trainer):
    """Minimizes summed contrastive loss over class-balanced pair batches; best weights by test accuracy."""

    metric_name = "accuracy"

    def __init__(self, model: GnnModel, graphs: Dict[str, GraphTensors], train_pairs: Sequence[GraphPair],
                 test_pairs: Sequence[GraphPair], cfg: TrainConfig, checkpoint_path: Optional[str] = None,
                 vocab: Optional[NodeVocab] = None):
        super().__init__(model, cfg, checkpoint_path, vocab)
        if not train_pairs or not test_pairs:
            raise ValueError("training and test pairs must both be nonempty")
        self.graphs = graphs
        self.train_pairs = list(train_pairs)
        self.test_pairs = list(test_pairs)
        self.positives = [p for p in self.train_pairs if p.label == SIMILAR]
        self.negatives = [p for p in self.train_pairs if p.label != SIMILAR]

    def batches(self) -> List[list]:
        """Half similar, half dissimilar pairs per batch, cycling through the smaller class."""
        if not self.positives or not self.negatives:
            order = self.rng.permutation(len(self.train_pairs))
            pairs = [self.train_pairs[i] for i in order]
            size = self.cfg.batch_size
            return [pairs[s:s + size] for s in range(0, len(pairs), size)]

        pos = [self.positives[i] for i in self.rng.permutation(len(self.positives))]
        neg = [self.negatives[i] for i in self.rng.permutation(len(self.negatives))]
        n_batches = math.ceil(len(self.train_pairs) / self.cfg.batch_size)
        half = max(1, self.cfg.batch_size // 2)
        batches = []
        for b in range(n_batches):
            batch = [pos[(b * half + j) % len(pos)] for j in range(half)]
            batch += [neg[(b * half + j) % len(neg)] for j in range(self.cfg.batch_size - half or 1)]
            batches.append(batch)
        return batches

    def batch_loss(self, batch: List[GraphPair]):
        embedded = {}
        for pair in batch:
            for name in (pair.first, pair.second):
                if name not in embedded:
                    embedded[name] = self.model.embed_tensor(self.graphs[name])
        loss = None
        for pair in batch:
            try:
                s = cosine(embedded[pair.first], embedded[pair.second])
            except ZeroVector:
                logger.debug("skipping pair %s|%s with a zero embedding", pair.first, pair.second)
                continue
            term = contrastive_loss(s, pair.label, self.cfg.margin)
            loss = term if loss is None else add(loss, term)
        return loss

    def evaluate(self) -> EvalReport:
        names = sorted({n for p in self.test_pairs for n in (p.first, p.second)})
        vectors = {n: self.model.embed_tensor(self.graphs[n]) for n in names}
        items = []
        for p in self.test_pairs:
            try:
                s = cosine(vectors[p.first], vectors[p.second]).item()
            except ZeroVector:
                s = 0.0
            truth = PIRACY_LABEL if p.label == SIMILAR else NON_PIRACY_LABEL
            items.append({"item": f"{p.first}|{p.second}", "truth": truth, "score": s,
                          "verdict": piracy_verdict(s, self.cfg.delta)})
        counts = confusion([i["truth"] for i in items], [i["verdict"] for i in items], PIRACY_LABEL)
        return compute_metrics(counts, items)


def train_graph_classifier(model: GnnModel, train: Sequence[GraphTensors], test: Sequence[GraphTensors],
                           cfg: TrainConfig, checkpoint_path: Optional[str] = None,
                           vocab: Optional[NodeVocab] = None) -> TrainResult:
    return GraphTrainer(model, train, test, cfg, checkpoint_path, vocab).train()


def train_pair_model(model: GnnModel, graphs: Dict[str, GraphTensors], train_pairs: Sequence[GraphPair],
                     test_pairs: Sequence[GraphPair], cfg: TrainConfig, checkpoint_path: Optional[str] = None,
                     vocab: Optional[NodeVocab] = None) -> TrainResult:
    return PairTrainer(model, graphs, train_pairs, test_pairs, cfg, checkpoint_path, vocab).train()
