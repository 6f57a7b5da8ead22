import os
from typing import Optional

from src.config import ModelConfig
from src.graph2vec.model import GnnModel

DEFAULT_HEAD = "classifier"


def get_model(in_dim: int, config: Optional[ModelConfig] = None, head: Optional[str] = None,
              seed: Optional[int] = None, vocab_fp: str = "") -> GnnModel:
    """
    Returns a freshly initialized GnnModel.
    Head and seed fall back to environment variables, then to the library defaults.
    """
    head = head or os.getenv("GATESIGHT_HEAD", DEFAULT_HEAD)
    if seed is None:
        seed = int(os.getenv("GATESIGHT_SEED", "0"))

    return GnnModel(
        in_dim=in_dim,
        config=config or ModelConfig(),
        head=head,
        seed=seed,
        vocab_fp=vocab_fp,
    )
