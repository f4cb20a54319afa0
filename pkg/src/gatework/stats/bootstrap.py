"""Bootstrap standard error of the median.

Nonparametric: B resamples of size n with replacement; the SE is the
standard deviation of the B resample medians. Replicate b draws from its
own substream (seed, b), so a parallel run reproduces the serial result
bit for bit. ``method="exhaustive"`` enumerates all n^n equally likely
resamples instead (tiny n only) and returns the exact distribution SD.
"""

from __future__ import annotations

import itertools
import math
import statistics
from typing import Sequence

import numpy as np

from gatework.errors import EmptyValues
from gatework.rng import substream

DEFAULT_B = 10_000
_EXHAUSTIVE_MAX_N = 7


def _resample_medians(values: np.ndarray, n_replicates: int, seed: int) -> np.ndarray:
    n = len(values)
    medians = np.empty(n_replicates)
    for b in range(n_replicates):
        idx = substream(seed, b).integers(0, n, size=n)
        medians[b] = np.median(values[idx])
    return medians


def bootstrap_median_se(
    values: Sequence[float],
    n_replicates: int = DEFAULT_B,
    seed: int = 0,
    method: str = "sample",
) -> float:
    if len(values) == 0:
        raise EmptyValues("bootstrap needs at least one value")
    if n_replicates < 1:
        raise ValueError("n_replicates must be >= 1")

    if method == "exhaustive":
        n = len(values)
        if n > _EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive enumeration limited to n <= {_EXHAUSTIVE_MAX_N}")
        medians = [
            statistics.median(values[i] for i in combo) for combo in itertools.product(range(n), repeat=n)
        ]
        mean = sum(medians) / len(medians)
        return math.sqrt(sum((m - mean) ** 2 for m in medians) / len(medians))
    if method != "sample":
        raise ValueError(f"unknown method {method!r}")

    # sort first: the estimate is a function of the value multiset, not its order
    medians = _resample_medians(np.sort(np.asarray(values, dtype=float)), n_replicates, seed)
    if n_replicates == 1:
        return 0.0
    return float(np.std(medians, ddof=1))
