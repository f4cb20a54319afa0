"""Simulation configuration: regimes, worker models, hybrid parameters.

Configs are JSON documents; the shipped calibration fixture lives at
``gatework/data/calibration.json``. Probability tables are given as
non-negative weights and normalized at load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

from gatework.errors import ConfigInvalid
from gatework.quality import GRADE_ORDER, Grade
from gatework.workers.synthetic import LognormalSpec, SyntheticWorkerModel


class Regime(str, Enum):
    HYBRID = "hybrid"
    AI_ONLY = "ai_only"
    HUMAN_ONLY = "human_only"


#: which worker model each regime draws its primary outcome from
PRIMARY_MODEL = {Regime.AI_ONLY: "ai", Regime.HUMAN_ONLY: "expert", Regime.HYBRID: "ai"}

LadderRow = tuple[float, float, float, float]  # probabilities over GRADE_ORDER


def _ladder_row(weights: Mapping[str, float], allow_decline: bool) -> LadderRow:
    raw = [float(weights.get(g.value, 0.0)) for g in GRADE_ORDER]
    if any(w < 0 for w in raw) or sum(raw) <= 0:
        raise ConfigInvalid(f"ladder row weights must be non-negative with a positive sum: {dict(weights)}")
    if not allow_decline and raw[GRADE_ORDER.index(Grade.DECLINE)] > 0:
        raise ConfigInvalid("only the escalation ladder's Decline row may keep probability on Decline")
    total = sum(raw)
    return tuple(w / total for w in raw)


def draw_from_row(row: LadderRow, u: float) -> Grade:
    edge = 0.0
    for grade, p in zip(GRADE_ORDER, row):
        edge += p
        if u < edge:
            return grade
    return GRADE_ORDER[-1]


@dataclass(frozen=True)
class HybridParams:
    """Two-stage quality and time model for the hybrid regime.

    The AI stage draws quality from the ai worker model. A task is
    escalated when the AI declined (expert rescue), drew Bad, or an extra
    escalation fires (step uncertainty). Escalated tasks redraw quality
    from the escalation ladder row of their AI-stage label; non-escalated
    tasks pass the step gates and redraw from the (lighter) gate ladder.
    """

    connect: LognormalSpec
    base_exec: LognormalSpec
    repair_exec: LognormalSpec
    extra_escalation_prob: float
    gate_ladder: dict[Grade, LadderRow]
    escalation_ladder: dict[Grade, LadderRow]
    ai_rate_usd_h: float = 1.0
    expert_rate_usd_h: float = 15.0
    gate_review_h: float = 0.4

    def __post_init__(self):
        if not (0.0 <= self.extra_escalation_prob <= 1.0):
            raise ConfigInvalid("extra_escalation_prob must lie in [0, 1]")
        for grade in (Grade.GOOD, Grade.MEDIOCRE, Grade.BAD):
            if grade not in self.gate_ladder:
                raise ConfigInvalid(f"gate ladder misses a row for {grade.value}")
        for grade in GRADE_ORDER:
            if grade not in self.escalation_ladder:
                raise ConfigInvalid(f"escalation ladder misses a row for {grade.value}")

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "HybridParams":
        gate = {
            Grade(name): _ladder_row(row, allow_decline=False) for name, row in d["gate_ladder"].items()
        }
        esc = {
            Grade(name): _ladder_row(row, allow_decline=(name == Grade.DECLINE.value))
            for name, row in d["escalation_ladder"].items()
        }
        return cls(
            connect=LognormalSpec.from_dict(d["connect"]),
            base_exec=LognormalSpec.from_dict(d["base_exec"]),
            repair_exec=LognormalSpec.from_dict(d["repair_exec"]),
            extra_escalation_prob=float(d.get("extra_escalation_prob", 0.0)),
            gate_ladder=gate,
            escalation_ladder=esc,
            ai_rate_usd_h=float(d.get("ai_rate_usd_h", 1.0)),
            expert_rate_usd_h=float(d.get("expert_rate_usd_h", 15.0)),
            gate_review_h=float(d.get("gate_review_h", 0.4)),
        )


@dataclass(frozen=True)
class SimConfig:
    regime: Regime
    n_tasks: int
    seed: int
    worker_models: dict[str, SyntheticWorkerModel]
    category_mix: tuple[tuple[tuple[str, str], float], ...]  # ((area, category), probability)
    hybrid: HybridParams | None = None
    max_rework: int = 2
    consistency_threshold: float = 0.7

    def __post_init__(self):
        if self.n_tasks < 1:
            raise ConfigInvalid("n_tasks must be >= 1")
        total = sum(p for _, p in self.category_mix)
        if not self.category_mix or abs(total - 1.0) > 1e-9:
            raise ConfigInvalid("category_mix must be non-empty and sum to 1")
        needed = PRIMARY_MODEL[self.regime]
        if needed not in self.worker_models:
            raise ConfigInvalid(f"regime {self.regime.value} needs worker model {needed!r}")
        if self.regime is Regime.HYBRID and self.hybrid is None:
            raise ConfigInvalid("hybrid regime needs the hybrid parameter block")

    def with_overrides(
        self, regime: str | None = None, n_tasks: int | None = None, seed: int | None = None
    ) -> "SimConfig":
        return replace(
            self,
            regime=Regime(regime) if regime is not None else self.regime,
            n_tasks=n_tasks if n_tasks is not None else self.n_tasks,
            seed=seed if seed is not None else self.seed,
        )


def _parse_category_mix(raw: Mapping[str, float]) -> tuple[tuple[tuple[str, str], float], ...]:
    cells = []
    for key in sorted(raw):
        weight = float(raw[key])
        if weight < 0:
            raise ConfigInvalid(f"category weight for {key!r} must be >= 0")
        area, _, category = key.partition("/")
        if not category:
            raise ConfigInvalid(f"category_mix keys are 'Area/Category', got {key!r}")
        cells.append(((area.strip(), category.strip()), weight))
    total = sum(w for _, w in cells)
    if total <= 0:
        raise ConfigInvalid("category_mix weights must have a positive sum")
    return tuple((cell, w / total) for cell, w in cells)


def parse_sim_config(raw: Mapping[str, Any]) -> SimConfig:
    try:
        models = {name: SyntheticWorkerModel.from_dict(m) for name, m in raw["worker_models"].items()}
        hybrid = HybridParams.from_dict(raw["hybrid"]) if "hybrid" in raw else None
        return SimConfig(
            regime=Regime(raw.get("regime", "hybrid")),
            n_tasks=int(raw.get("n_tasks", 1000)),
            seed=int(raw.get("seed", 0)),
            worker_models=models,
            category_mix=_parse_category_mix(raw["category_mix"]),
            hybrid=hybrid,
            max_rework=int(raw.get("gate_policy", {}).get("max_rework", 2)),
            consistency_threshold=float(raw.get("qa", {}).get("consistency_threshold", 0.7)),
        )
    except ConfigInvalid:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad simulation config: {exc}") from exc


def load_sim_config(path: str | Path) -> SimConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigInvalid(f"config file not found: {path}")
    return parse_sim_config(json.loads(path.read_text(encoding="utf-8")))
