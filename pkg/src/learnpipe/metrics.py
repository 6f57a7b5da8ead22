"""Confusion counts and the precision / recall / F1 / accuracy derived from them."""
import json
from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, Field


class Counts(BaseModel):
    tp: int = Field(0, ge=0)
    fp: int = Field(0, ge=0)
    fn: int = Field(0, ge=0)
    tn: int = Field(0, ge=0)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


class EvalReport(BaseModel):
    counts: Counts
    precision: float
    recall: float
    f1: float
    accuracy: float
    degenerate: bool = False  # some ratio had a zero denominator and was reported as 0
    per_item: List[dict] = Field(default_factory=list)

    def metric(self, name: str) -> float:
        return getattr(self, name)

    def to_json(self) -> str:
        doc = {
            "counts": self.counts.model_dump(),
            "metrics": {
                "precision": self.precision,
                "recall": self.recall,
                "f1": self.f1,
                "accuracy": self.accuracy,
                "degenerate": self.degenerate,
            },
            "per_item": self.per_item,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _ratio(num: float, den: float):
    return (num / den, False) if den else (0.0, True)


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def compute_metrics(counts: Counts, per_item: Optional[List[dict]] = None) -> EvalReport:
    precision, d1 = _ratio(counts.tp, counts.tp + counts.fp)
    recall, d2 = _ratio(counts.tp, counts.tp + counts.fn)
    accuracy, d3 = _ratio(counts.tp + counts.tn, counts.total)
    f1 = f1_score(precision, recall)
    return EvalReport(
        counts=counts,
        precision=precision,
        recall=recall,
        f1=f1,
        accuracy=accuracy,
        degenerate=d1 or d2 or d3 or (precision + recall == 0),
        per_item=per_item or [],
    )


def confusion(truth: Sequence[str], predicted: Sequence[str], positive: str) -> Counts:
    c = Counts()
    for t, p in zip(truth, predicted, strict=True):
        if p == positive:
            if t == positive:
                c.tp += 1
            else:
                c.fp += 1
        elif t == positive:
            c.fn += 1
        else:
            c.tn += 1
    return c


def mean_report(reports: Sequence[EvalReport]) -> Dict[str, float]:
    """Fold-averaged metrics for cross-validation."""
    n = len(reports)
    return {
        name: sum(r.metric(name) for r in reports) / n
        for name in ("precision", "recall", "f1", "accuracy")
    }
