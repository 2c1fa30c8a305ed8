"""Deterministic seed derivation for nested, order-independent randomness."""

import numpy as np


def derive_seed(*keys: int) -> int:
    """Collapse a key path (seed, index, ...) into one 32-bit seed."""
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1)[0])
