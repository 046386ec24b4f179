from __future__ import annotations

import numpy as np
import pytest

from xorcert import PartitionedInstance


def dupfree_partitioned(rng: np.random.Generator, n: int, ell: int, m: int) -> PartitionedInstance:
    """Random partitioned instance with distinct (part, pair) slots (mu in {-1, +1})."""
    cap = ell * n * (n - 1) // 2
    if m > cap:
        raise ValueError(f"cannot place {m} distinct constraints in {cap} slots")
    seen: set[tuple[int, int, int]] = set()
    cons = []
    while len(cons) < m:
        p = int(rng.integers(ell))
        u, v = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        if (p, u, v) in seen:
            continue
        seen.add((p, u, v))
        cons.append((p, u, v, int(rng.choice([-1, 1]))))
    return PartitionedInstance(n=n, ell=ell, constraints=tuple(cons))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0xC0FFEE)
