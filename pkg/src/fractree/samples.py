"""Named example trees and the seeded regression corpus."""
from __future__ import annotations

import random

from .tree import random_spec, validate_spec

GOLDEN = validate_spec(2, ["0", "10"])
FULL_BINARY = validate_spec(2, ["0", "1"])
FOUR_LEAF = validate_spec(2, ["00", "01", "10", "110"])
TERNARY = validate_spec(3, ["0", "1", "20"])

NAMED = {
    "golden": GOLDEN,
    "full-binary": FULL_BINARY,
    "four-leaf": FOUR_LEAF,
    "ternary": TERNARY,
    "full-ternary": validate_spec(3, ["0", "1", "2"]),
    "period-2": validate_spec(2, ["00", "01", "10", "11"]),
    "comb": validate_spec(2, ["0", "10", "110", "111"]),
    "ternary-mixed": validate_spec(3, ["0", "10", "11", "12", "2"]),
    "sparse-deep": validate_spec(2, ["0", "100", "1010", "1111"]),
}


def random_specs(count: int, seed: int = 0, ms=(2, 3), k_range=(2, 12), max_depth: int = 8) -> list:
    """``count`` seeded random specs with alphabet drawn from ``ms``."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        m = rng.choice(ms)
        k = rng.randint(*k_range)
        out.append(random_spec(rng, m, k, max_depth))
    return out


def regression_specs(seed: int = 2024) -> list:
    """Hand-picked trees plus small random ones, sized for depth-5 checks."""
    return list(NAMED.values()) + random_specs(6, seed=seed, k_range=(2, 5), max_depth=5)

