from typing import Sequence, Tuple

import numpy as np

from src.data.encode import GraphTensors
from src.graph2vec.model import GnnModel, TROJAN, NON_TROJAN

TROJAN_LABEL = "Trojan"
NON_TROJAN_LABEL = "Non_Trojan"
PIRACY_LABEL = "Piracy"
NON_PIRACY_LABEL = "Non_Piracy"
CLASS_LABELS = (TROJAN_LABEL, NON_TROJAN_LABEL)  # softmax index order


def ht_verdict(probs: Sequence[float]) -> str:
    """Trojan only when p[Trojan] is strictly larger; a tie is Non_Trojan."""
    return TROJAN_LABEL if probs[TROJAN] > probs[NON_TROJAN] else NON_TROJAN_LABEL


def piracy_verdict(similarity: float, delta: float) -> str:
    return PIRACY_LABEL if similarity > delta else NON_PIRACY_LABEL


def predict_ht(model: GnnModel, t: GraphTensors) -> Tuple[str, np.ndarray]:
    probs = model.class_probs(model.embed_tensor(t)).data.reshape(-1)
    return ht_verdict(probs), probs


def predict_piracy(model: GnnModel, t1: GraphTensors, t2: GraphTensors, delta: float = 0.5) -> Tuple[str, float]:
    similarity = model.pair_score(t1, t2).item()
    return piracy_verdict(similarity, delta), similarity
