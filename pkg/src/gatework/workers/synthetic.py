"""Stochastic synthetic worker models for the simulator.

Times are lognormal, parametrized by (median hours, sigma): the reported
aggregates they are fitted to show medians well below averages, i.e. heavy
right tails, which a two-parameter lognormal captures while staying
fittable to a (median, mean) pair. A zero median degenerates to exactly 0.

``sample_outcome`` consumes exactly four draws from its generator in a
fixed order (decline uniform, quality uniform, connect normal, exec
normal), so substreams stay aligned however the caller branches on the
results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from gatework.quality import Grade
from gatework.rng import substream

__all__ = [
    "LognormalSpec",
    "Outcome",
    "QUALITY_LABELS",
    "SyntheticWorkerModel",
    "draw_quality",
    "sample_outcome",
    "substream",
]

QUALITY_LABELS = (Grade.GOOD, Grade.MEDIOCRE, Grade.BAD)
PROB_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LognormalSpec:
    median_h: float
    sigma: float

    def __post_init__(self):
        if self.median_h < 0 or not math.isfinite(self.median_h):
            raise ValueError("median_h must be finite and >= 0")
        if self.sigma < 0 or not math.isfinite(self.sigma):
            raise ValueError("sigma must be finite and >= 0")

    @property
    def mean_h(self) -> float:
        return self.median_h * math.exp(self.sigma**2 / 2.0)

    def sample(self, z: float) -> float:
        """Value at standard-normal draw z; exact median_h when sigma=0."""
        if self.median_h == 0.0:
            return 0.0
        return self.median_h * math.exp(self.sigma * z)

    def to_dict(self) -> dict[str, float]:
        return {"median_h": self.median_h, "sigma": self.sigma}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "LognormalSpec":
        return cls(median_h=float(d["median_h"]), sigma=float(d.get("sigma", 0.0)))


@dataclass(frozen=True)
class SyntheticWorkerModel:
    """Generative description of one worker population.

    quality_dist is conditional on the task not being declined and covers
    exactly {Good, Mediocre, Bad}; decline is drawn first and is mutually
    exclusive with the quality labels, so the four unconditional shares sum
    to one.
    """

    quality_dist: tuple[float, float, float]  # P(Good), P(Mediocre), P(Bad)
    decline_prob: float
    connect_time_dist: LognormalSpec
    exec_time_dist: LognormalSpec
    cost_fixed_usd: float = 0.0
    cost_per_hour_usd: float = 0.0

    def __post_init__(self):
        probs = self.quality_dist
        if len(probs) != 3 or any(p < 0 or p > 1 or not math.isfinite(p) for p in probs):
            raise ValueError("quality_dist must be three probabilities in [0, 1]")
        if abs(sum(probs) - 1.0) > PROB_TOLERANCE:
            raise ValueError(f"quality_dist must sum to 1 within {PROB_TOLERANCE}")
        if not (0.0 <= self.decline_prob <= 1.0):
            raise ValueError("decline_prob must lie in [0, 1]")
        if self.cost_fixed_usd < 0 or self.cost_per_hour_usd < 0:
            raise ValueError("cost components must be >= 0")

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "SyntheticWorkerModel":
        weights = d.get("quality_weights", {})
        raw = [float(weights.get(g.value, 0.0)) for g in QUALITY_LABELS]
        if any(w < 0 for w in raw) or sum(raw) <= 0:
            raise ValueError("quality_weights must be non-negative with a positive sum")
        total = sum(raw)
        cost = d.get("cost", {})
        return cls(
            quality_dist=tuple(w / total for w in raw),
            decline_prob=float(d.get("decline_prob", 0.0)),
            connect_time_dist=LognormalSpec.from_dict(d["connect"]),
            exec_time_dist=LognormalSpec.from_dict(d["exec"]),
            cost_fixed_usd=float(cost.get("fixed_usd", 0.0)),
            cost_per_hour_usd=float(cost.get("per_hour_usd", 0.0)),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "quality_weights": {g.value: p for g, p in zip(QUALITY_LABELS, self.quality_dist)},
            "decline_prob": self.decline_prob,
            "connect": self.connect_time_dist.to_dict(),
            "exec": self.exec_time_dist.to_dict(),
            "cost": {"fixed_usd": self.cost_fixed_usd, "per_hour_usd": self.cost_per_hour_usd},
        }


@dataclass(frozen=True)
class Outcome:
    quality: Grade
    declined: bool
    connect_h: float
    exec_h: float
    cost_usd: float


def draw_quality(dist: tuple[float, float, float], u: float) -> Grade:
    edge = 0.0
    for grade, p in zip(QUALITY_LABELS, dist):
        edge += p
        if u < edge:
            return grade
    return QUALITY_LABELS[-1]


def sample_outcome(model: SyntheticWorkerModel, rng: np.random.Generator) -> Outcome:
    """One task outcome; always advances the generator by exactly 4 draws."""
    u_decline = rng.random()
    u_quality = rng.random()
    z_connect = rng.standard_normal()
    z_exec = rng.standard_normal()

    declined = u_decline < model.decline_prob
    connect_h = model.connect_time_dist.sample(z_connect)
    if declined:
        return Outcome(quality=Grade.DECLINE, declined=True, connect_h=connect_h, exec_h=0.0, cost_usd=0.0)
    quality = draw_quality(model.quality_dist, u_quality)
    exec_h = model.exec_time_dist.sample(z_exec)
    cost = model.cost_fixed_usd + model.cost_per_hour_usd * exec_h
    return Outcome(quality=quality, declined=False, connect_h=connect_h, exec_h=exec_h, cost_usd=cost)
