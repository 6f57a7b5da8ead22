from typing import Callable, Optional, Sequence

import numpy as np

from src.nncore.tensor import Parameter, Tensor, backward


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic) + abs(numeric), 1e-6)


def gradcheck(loss_fn: Callable[[], Tensor], params: Sequence[Parameter], h: float = 1e-5,
              max_entries: Optional[int] = None, rng: Optional[np.random.Generator] = None) -> float:
    """Largest relative error between backprop and central differences.

    ``loss_fn`` must rebuild the loss from the parameters' current values. With
    ``max_entries`` only that many randomly chosen entries per parameter are probed.
    """
    rng = rng or np.random.default_rng(0)
    for p in params:
        p.zero_grad()
    backward(loss_fn())
    analytic = {id(p): p.grad.copy() for p in params}

    worst = 0.0
    for p in params:
        flat = p.data.reshape(-1)
        entries = np.arange(flat.size)
        if max_entries is not None and flat.size > max_entries:
            entries = rng.choice(flat.size, size=max_entries, replace=False)
        for i in entries:
            original = flat[i]
            flat[i] = original + h
            plus = loss_fn().item()
            flat[i] = original - h
            minus = loss_fn().item()
            flat[i] = original
            numeric = (plus - minus) / (2 * h)
            worst = max(worst, relative_error(analytic[id(p)].reshape(-1)[i], numeric))
    return worst
