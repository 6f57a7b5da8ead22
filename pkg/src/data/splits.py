import itertools
import math
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence

import numpy as np

from src.errors import BadLabel, DegenerateSplit, SelfPair, UnknownCircuit

SIMILAR = 1
DISSIMILAR = -1


@dataclass(frozen=True)
class GraphPair:
    first: str
    second: str
    label: int  # +1 Similar, -1 Dissimilar

    def __post_init__(self):
        if self.first == self.second:
            raise SelfPair(self.first)
        if self.label not in (SIMILAR, DISSIMILAR):
            raise BadLabel(self.label)


@dataclass
class DatasetSplit:
    train: List[Hashable]
    test: List[Hashable]
    seed: int
    ratio: float
    held_out: Optional[str] = None


def split(ids: Sequence[Hashable], ratio: float, seed: int) -> DatasetSplit:
    """Seeded shuffle, then the first round(ratio * n) items become the test side."""
    if not 0 < ratio < 1:
        raise DegenerateSplit(f"test ratio must lie in (0, 1), got {ratio}")
    n = len(ids)
    n_test = math.floor(ratio * n + 0.5)
    if n < 2 or n_test == 0 or n_test == n:
        raise DegenerateSplit(f"{n} item(s) at ratio {ratio} leave one side empty")
    order = np.random.default_rng(seed).permutation(n)
    test = [ids[i] for i in order[:n_test]]
    train = [ids[i] for i in order[n_test:]]
    return DatasetSplit(train, test, seed, ratio)


def leave_one_circuit_out(ids: Sequence[Hashable], circuit_of: Dict[Hashable, str],
                          held_out: str) -> DatasetSplit:
    missing = [i for i in ids if i not in circuit_of]
    if missing:
        raise DegenerateSplit(f"item '{missing[0]}' has no circuit assignment")
    test = [i for i in ids if circuit_of[i] == held_out]
    if not test:
        raise UnknownCircuit(held_out)
    train = [i for i in ids if circuit_of[i] != held_out]
    if not train:
        raise DegenerateSplit(f"holding out '{held_out}' leaves no training items")
    return DatasetSplit(train, test, seed=0, ratio=len(test) / len(ids), held_out=held_out)


def make_pairs(ids: Sequence[str], category_of: Dict[str, str]) -> List[GraphPair]:
    """Every unordered pair once; Similar iff both members share a category."""
    return [
        GraphPair(a, b, SIMILAR if category_of[a] == category_of[b] else DISSIMILAR)
        for a, b in itertools.combinations(ids, 2)
    ]
