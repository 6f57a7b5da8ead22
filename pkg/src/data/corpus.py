"""
Corpus layout: ``<root>/<design_name>/*.v`` plus a ``labels.json`` manifest at the root.

Manifest values are either a plain label/category string or an object
``{"label": ..., "circuit": ...}`` naming the base circuit used for leave-one-circuit-out
splits. Without an explicit circuit, the design-name prefix before the first '-' is used
(``AES-T100`` -> ``AES``).
"""
import json
import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Optional

from src.errors import ConfigError, EmptyCorpus
from src.hwgraph.source import VERILOG_SUFFIXES

logger = logging.getLogger(__name__)

MANIFEST = "labels.json"


@dataclass
class CorpusItem:
    name: str
    path: str
    label: Optional[str] = None
    circuit: Optional[str] = None


def base_circuit(name: str) -> str:
    return name.split("-", 1)[0]


def read_manifest(path: str) -> Dict[str, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"label manifest not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: manifest must map design names to labels")
    entries = {}
    for name, value in raw.items():
        if isinstance(value, str):
            entries[name] = {"label": value, "circuit": base_circuit(name)}
        elif isinstance(value, dict) and isinstance(value.get("label"), str):
            entries[name] = {"label": value["label"], "circuit": value.get("circuit") or base_circuit(name)}
        else:
            raise ConfigError(f"{path}: entry '{name}' must be a string or {{\"label\", \"circuit\"}}")
    return entries


def design_dirs(root: str) -> List[str]:
    """Sorted names of the sub-directories of ``root`` that contain Verilog files."""
    if not os.path.isdir(root):
        raise ConfigError(f"corpus root is not a directory: {root}")
    names = []
    for entry in sorted(os.listdir(root)):
        full = os.path.join(root, entry)
        if os.path.isdir(full) and any(f.endswith(VERILOG_SUFFIXES) for f in os.listdir(full)):
            names.append(entry)
    return names


def load_corpus(root: str, manifest: Optional[str] = None, require_labels: bool = True) -> List[CorpusItem]:
    names = design_dirs(root)
    manifest = manifest or os.path.join(root, MANIFEST)
    if not require_labels and not os.path.exists(manifest):
        return [CorpusItem(n, os.path.join(root, n)) for n in names]
    entries = read_manifest(manifest)

    problems = [f"'{n}' is in the manifest but has no design directory" for n in entries if n not in names]
    if require_labels:
        problems += [f"'{n}' has no manifest entry" for n in names if n not in entries]
    if problems:
        raise ConfigError(f"corpus {root} does not match {manifest}:\n  " + "\n  ".join(problems))

    items = [
        CorpusItem(n, os.path.join(root, n), entries.get(n, {}).get("label"), entries.get(n, {}).get("circuit"))
        for n in names
    ]
    if not items:
        raise EmptyCorpus(f"no designs under {root}")
    logger.info("Loaded corpus %s: %d designs", root, len(items))
    return items


def write_manifest(root: str, entries: Dict[str, object]):
    with open(os.path.join(root, MANIFEST), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(entries, fh, indent=2, sort_keys=True)
        fh.write("\n")
