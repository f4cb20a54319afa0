"""Deterministic splittable RNG substreams.

One scheme shared by the simulator and the bootstrap: child b of seed s is
``SeedSequence(entropy=s, spawn_key=(b, ...))`` feeding PCG64. Streams are
a pure function of (seed, path), so work can be split across any number of
parallel drivers without changing a single draw.
"""

from __future__ import annotations

import numpy as np


def substream(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=tuple(path))))
