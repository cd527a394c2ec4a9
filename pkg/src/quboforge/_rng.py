"""Deterministic random stream derivation.

All randomness in the package flows through numpy's counter-based Philox
generator, keyed by a 64-bit user seed plus a spawn key that names the
stream.  Streams with different spawn keys are statistically independent,
so instance generation, solver initialization, and each annealing read
draw from disjoint streams even when they share the same seed.

Stream layout (spawn key prefix):

* ``(INSTANCE_STREAM,)``          -- matrix generation
* ``(SOLVER_STREAM,)``            -- gradient-solver parameter init
* ``(ANNEAL_READ_STREAM, read)``  -- one sub-stream per annealing read
"""

from __future__ import annotations

import numpy as np

INSTANCE_STREAM = 0
SOLVER_STREAM = 1
ANNEAL_READ_STREAM = 2


def stream(seed: int, *spawn_key: int) -> np.random.Generator:
    """Return the Philox generator for ``seed`` and the given spawn key."""
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in spawn_key))
    return np.random.Generator(np.random.Philox(seq))
