"""Deterministic derivation of child seeds from a master seed."""

from __future__ import annotations

import numpy as np


def spawn_seeds(seed: int, n: int) -> list[int]:
    """n independent child seeds, stable across runs and platforms."""
    rng = np.random.default_rng(seed)
    return [int(s) for s in rng.integers(0, 2**63 - 1, size=n)]
