import hashlib
from dataclasses import dataclass, field
from typing import Dict, Iterable, List

from src.errors import EmptyCorpus, UnknownLabel
from src.hwgraph.graph import HWGraph


@dataclass
class NodeVocab:
    labels: List[str]
    index: Dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("vocabulary labels must be unique")
        self.labels = sorted(self.labels)
        self.index = {label: i for i, label in enumerate(self.labels)}

    def __len__(self) -> int:
        return len(self.labels)

    def position(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise UnknownLabel(label, "not in the model vocabulary") from None

    @property
    def fingerprint(self) -> str:
        return hashlib.sha256("\n".join(self.labels).encode("utf-8")).hexdigest()

    def save(self, path: str):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("".join(f"{label}\n" for label in self.labels))

    @classmethod
    def load(cls, path: str) -> "NodeVocab":
        with open(path, encoding="utf-8") as fh:
            return cls([line.rstrip("\n") for line in fh if line.strip()])


def build_vocab(graphs: Iterable[HWGraph]) -> NodeVocab:
    labels = set()
    count = 0
    for g in graphs:
        count += 1
        labels.update(n.label for n in g.nodes)
    if not count or not labels:
        raise EmptyCorpus("cannot build a vocabulary from an empty corpus")
    return NodeVocab(sorted(labels))
