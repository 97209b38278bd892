"""Learning run record."""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, List, Optional

from app.core.stats import best_trailing
from app.schemas.training import RunSummary, StopReason

if TYPE_CHECKING:
    from app.services.session import Lineup


@dataclass
class RunRecord:
    """Per-episode rewards and the trained agents of one learning run."""

    label: str
    difficulty: int
    iteration: int
    seed: int
    window: int
    rewards: List[int] = field(default_factory=list)
    trailing: List[Optional[float]] = field(default_factory=list)
    stop_reason: StopReason = StopReason.BUDGET
    lineup: Optional["Lineup"] = None
    wall_seconds: float = 0.0
    parent: Optional[str] = None

    @property
    def episodes_used(self) -> int:
        return len(self.rewards)

    @property
    def wins(self) -> int:
        return sum(1 for r in self.rewards if r > 0)

    @property
    def final_trailing(self) -> Optional[float]:
        return self.trailing[-1] if self.trailing else None

    def best_trailing(self, window: Optional[int] = None) -> Optional[float]:
        return best_trailing(self.rewards, window or self.window)

    def summary(self, best_window: Optional[int] = None) -> RunSummary:
        return RunSummary(
            label=self.label,
            difficulty=self.difficulty,
            iteration=self.iteration,
            seed=self.seed,
            episodes_used=self.episodes_used,
            stop_reason=self.stop_reason,
            final_trailing=self.final_trailing,
            best_trailing=self.best_trailing(best_window),
            wins=self.wins,
            wall_seconds=self.wall_seconds,
            parent=self.parent,
        )
