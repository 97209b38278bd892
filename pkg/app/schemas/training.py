"""Learning budget, interruption and curriculum strategy schemas."""

from enum import Enum as PyEnum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.evaluation import AssignmentSpec, EvalReport, PolicyKind, SlotSpec


class StopReason(str, PyEnum):
    BUDGET = "budget"
    THRESHOLD = "threshold"


class Budget(BaseModel):
    """Episode budget of a learning step."""

    model_config = ConfigDict(frozen=True)

    iterations: int = Field(1, ge=1)
    episodes_per_iteration: int = Field(..., ge=1)
    episode_cap: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def check_cap(self) -> "Budget":
        if self.episode_cap is not None and self.episode_cap < self.episodes_per_iteration:
            raise ValueError("episode_cap must be >= episodes_per_iteration")
        return self

    @property
    def run_length(self) -> int:
        """Episodes of a single learning run."""
        return self.episode_cap if self.episode_cap is not None else self.episodes_per_iteration


class InterruptRule(BaseModel):
    """Stop learning once the trailing average reward exceeds a threshold."""

    model_config = ConfigDict(frozen=True)

    window: int = Field(100, ge=1)
    threshold: float


class StrategyKind(str, PyEnum):
    ONE_STEP = "one_step"
    TWO_STEP_CONTINUED = "two_step_continued"
    TWO_STEP_INTERRUPTED = "two_step_interrupted"


def _questing_only() -> AssignmentSpec:
    return AssignmentSpec(questing=SlotSpec(kind=PolicyKind.RL_DIRECT, encoding=2))


class StrategySpec(BaseModel):
    """A learning strategy: step-1 sweep, selection rule and step-2 budget."""

    model_config = ConfigDict(frozen=True)

    kind: StrategyKind
    assignment: AssignmentSpec = Field(default_factory=_questing_only)
    step1_difficulties: List[int] = Field(default_factory=lambda: list(range(1, 10)))
    step2_difficulty: int = Field(20, ge=1, le=20)
    selection_winrate: float = 0.90
    step1_budget: Budget = Budget(iterations=10, episodes_per_iteration=1000)
    step2_budget: Budget = Budget(iterations=20, episodes_per_iteration=2500)
    step1_interrupt: Optional[InterruptRule] = None
    step2_interrupt: Optional[InterruptRule] = None
    eval_games: int = Field(1000, ge=1)
    best_window: int = Field(1000, ge=1)

    @model_validator(mode="after")
    def check_steps(self) -> "StrategySpec":
        if not self.step1_difficulties:
            raise ValueError("step1_difficulties is empty")
        for d in self.step1_difficulties:
            if not 1 <= d < self.step2_difficulty:
                raise ValueError(f"step-1 difficulty {d} must be in 1..{self.step2_difficulty - 1}")
        if not self.assignment.rl_roles():
            raise ValueError("assignment has no RL slot to train")
        if self.kind == StrategyKind.TWO_STEP_INTERRUPTED:
            if self.step1_interrupt is None or self.step2_interrupt is None:
                raise ValueError("interrupted strategy needs both interrupt rules")
        for budget, rule in ((self.step1_budget, self.step1_interrupt), (self.step2_budget, self.step2_interrupt)):
            if rule is not None and rule.window > budget.run_length:
                raise ValueError("interrupt window exceeds the episode cap")
        return self


class RunSummary(BaseModel):
    """Serializable view of one learning run."""

    label: str
    difficulty: int
    iteration: int
    seed: int
    episodes_used: int
    stop_reason: StopReason
    final_trailing: Optional[float] = None
    best_trailing: Optional[float] = None
    wins: int
    wall_seconds: float
    parent: Optional[str] = None


class NetworkResult(BaseModel):
    """A trained network, its lineage and its evaluations."""

    provenance: str
    step1_difficulty: int
    run: RunSummary
    selection: Optional[EvalReport] = None
    final: Optional[EvalReport] = None
    selected: bool = False


class StrategyReport(BaseModel):
    """Outcome of a full strategy run."""

    kind: StrategyKind
    assignment: str
    master_seed: int
    step1: List[NetworkResult] = Field(default_factory=list)
    step2: List[NetworkResult] = Field(default_factory=list)
    per_difficulty_winrate: dict = Field(default_factory=dict)
    best: Optional[NetworkResult] = None
    total_episodes: int = 0
    wall_seconds: float = 0.0
    notes: List[str] = Field(default_factory=list)

    @property
    def best_provenance(self) -> Optional[str]:
        return self.best.provenance if self.best else None


class StrategyComparison(BaseModel):
    """Side-by-side result of the three strategies for one assignment."""

    assignment: str
    master_seed: int
    reports: List[StrategyReport]

    def render_table(self) -> str:
        lines = [f"{'strategy':<24}{'best':<14}{'winrate':<16}{'episodes':>10}{'hours':>8}"]
        for report in self.reports:
            best = report.best
            winrate = best.final.percent() if best and best.final else "-"
            lines.append(
                f"{report.kind.value:<24}{report.best_provenance or '-':<14}{winrate:<16}"
                f"{report.total_episodes:>10}{report.wall_seconds / 3600:>8.2f}"
            )
        return "\n".join(lines) + "\n"
