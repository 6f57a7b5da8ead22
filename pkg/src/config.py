import os
from typing import Any, Dict, List, Literal, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.errors import ConfigError

load_dotenv()

ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA_DIR = os.getenv("GATESIGHT_DATA_DIR", os.path.join(ROOT_DIR, "data"))
PRESETS_DIR = os.path.join(DATA_DIR, "presets")
CACHE_DIR = os.getenv("GATESIGHT_CACHE_DIR", os.path.join(ROOT_DIR, ".cache", "graphs"))
OUTPUT_DIR = os.getenv("GATESIGHT_OUTPUT_DIR", os.path.join(ROOT_DIR, "runs"))
LOG_LEVEL = os.getenv("GATESIGHT_LOG_LEVEL", "INFO")
SEED = int(os.getenv("GATESIGHT_SEED", "0"))


class ModelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    conv_dims: List[int] = Field([64, 64], min_length=1, description="output width of each graph-convolution layer")
    activation: Literal["relu", "tanh"] = Field("relu", description="activation of the convolution layers")
    directed_messages: bool = Field(False, description="aggregate over out-neighbors only instead of the undirected neighborhood")
    pooling_ratio: float = Field(0.5, gt=0, le=1, description="fraction of nodes kept by top-k attention pooling")
    readout: Literal["sum", "mean"] = Field("sum", description="graph readout reduction")
    mlp_hidden: List[int] = Field([32], description="hidden widths of the classifier MLP")


class TrainConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    epochs: int = Field(50, ge=0, description="passes over the training split")
    batch_size: int = Field(8, gt=0, description="graphs (or pairs) per optimizer step")
    lr: float = Field(1e-3, gt=0, description="optimizer step size")
    optimizer: Literal["adam", "sgd"] = Field("adam", description="parameter update rule")
    beta1: float = Field(0.9, ge=0, lt=1, description="adam first-moment decay")
    beta2: float = Field(0.999, ge=0, lt=1, description="adam second-moment decay")
    eps: float = Field(1e-8, gt=0, description="adam denominator guard")
    margin: float = Field(0.5, ge=0, lt=1, description="contrastive-loss margin for dissimilar pairs")
    delta: float = Field(0.5, gt=-1, lt=1, description="similarity above which a pair is judged pirated")
    seed: int = Field(SEED, description="seed for initialization, splits and batch order")
    mini_test_interval: int = Field(20, gt=0, description="optimizer steps between validation runs")
    test_ratio: float = Field(0.2, gt=0, lt=1, description="fraction of the corpus held out for testing")


class PathsConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    corpus: Optional[str] = Field(None, description="corpus root holding one directory per design")
    labels: Optional[str] = Field(None, description="label manifest (defaults to <corpus>/labels.json)")
    cache_dir: str = Field(CACHE_DIR, description="encoded-graph cache directory")
    output_dir: str = Field(OUTPUT_DIR, description="directory for checkpoints, reports and exports")
    checkpoint: Optional[str] = Field(None, description="checkpoint to load for inference (defaults to <output_dir>/model.ckpt)")


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    task: Literal["embed", "ht", "piracy"] = Field("ht", description="pipeline the preset is written for")
    graph_kind: Literal["AST", "DFG"] = Field("DFG", description="graph extracted from each design")
    top: Optional[str] = Field(None, description="top-module override")
    leave_out: Optional[str] = Field(None, description="base circuit held out for testing; '*' cross-validates over all")
    workers: int = Field(0, ge=0, description="extraction worker processes (0 = one per CPU)")
    paths: PathsConfig = Field(default_factory=PathsConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    out = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def load_run_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """YAML preset (if any) with command-line overrides applied on top."""
    data: Dict[str, Any] = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
    try:
        return RunConfig.model_validate(_merge(data, overrides or {}))
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        raise ConfigError(f"invalid configuration: {problems}") from e


def config_keys(model: type = RunConfig, prefix: str = "") -> List[str]:
    """One 'dotted.key  description (default)' line per configuration key."""
    lines = []
    for name, info in model.model_fields.items():
        annotation = info.annotation
        if isinstance(annotation, type) and issubclass(annotation, BaseModel):
            lines.extend(config_keys(annotation, f"{prefix}{name}."))
            continue
        default = info.get_default(call_default_factory=True)
        lines.append(f"{prefix}{name}  {info.description} (default: {default!r})")
    return lines
