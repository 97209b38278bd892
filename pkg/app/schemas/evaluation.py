"""Agent assignment, evaluation and hyper-parameter search schemas."""

from enum import Enum as PyEnum
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.exceptions import ConfigError


class Role(str, PyEnum):
    """Decision phases controlled by an agent."""

    PLANNING = "planning"
    QUESTING = "questing"
    DEFENSE = "defense"


class PolicyKind(str, PyEnum):
    """Agent type at one decision phase."""

    RANDOM = "random"
    RL_MACRO = "rl-macro"
    RL_DIRECT = "rl-direct"


class SlotSpec(BaseModel):
    """One decision slot: policy kind, questing encoding, optional bundle."""

    model_config = ConfigDict(frozen=True)

    kind: PolicyKind = PolicyKind.RANDOM
    encoding: Optional[int] = Field(None, ge=0, le=3)
    bundle: Optional[Path] = None

    @property
    def is_rl(self) -> bool:
        return self.kind != PolicyKind.RANDOM

    @property
    def label(self) -> str:
        return "RL" if self.is_rl else "random"

    @classmethod
    def parse(cls, text: str) -> "SlotSpec":
        """Parse ``random | rl-macro | rl-direct[:<0-3>]`` with optional ``@bundle``."""
        text = text.strip()
        bundle = None
        if "@" in text:
            text, path = text.split("@", 1)
            bundle = Path(path)
        encoding = None
        if ":" in text:
            text, enc = text.split(":", 1)
            if not enc.isdigit():
                raise ConfigError(f"Invalid encoding '{enc}'")
            encoding = int(enc)
        try:
            kind = PolicyKind(text.lower())
        except ValueError:
            raise ConfigError(f"Unknown agent kind '{text}'")
        if encoding is not None and not 0 <= encoding <= 3:
            raise ConfigError(f"Encoding {encoding} out of range 0..3")
        if kind is PolicyKind.RANDOM and bundle is not None:
            raise ConfigError(f"A random slot cannot load a bundle ('{bundle}')")
        return cls(kind=kind, encoding=encoding, bundle=bundle)


class AssignmentSpec(BaseModel):
    """Mapping of the three decision phases to agents."""

    model_config = ConfigDict(frozen=True)

    planning: SlotSpec = SlotSpec()
    questing: SlotSpec = SlotSpec()
    defense: SlotSpec = SlotSpec()

    @model_validator(mode="after")
    def check_defense(self) -> "AssignmentSpec":
        if self.defense.kind == PolicyKind.RL_MACRO:
            raise ValueError("defense has no macroaction scheme")
        return self

    @classmethod
    def parse(cls, text: str) -> "AssignmentSpec":
        """Parse ``planning,questing,defense`` slot specs."""
        parts = [part for part in text.split(",")]
        if len(parts) != 3:
            raise ConfigError("--agents needs exactly three comma-separated slots")
        planning, questing, defense = (SlotSpec.parse(p) for p in parts)
        if defense.kind == PolicyKind.RL_MACRO:
            raise ConfigError("defense has no macroaction scheme")
        return cls(planning=planning, questing=questing, defense=defense)

    def slot(self, role: Role) -> SlotSpec:
        return getattr(self, role.value)

    def rl_roles(self) -> List[Role]:
        return [role for role in Role if self.slot(role).is_rl]

    @property
    def label(self) -> str:
        return "-".join(self.slot(role).label for role in Role)


class EvalReport(BaseModel):
    """Winrate over a batch of seeded games."""

    assignment: str
    difficulty: int
    games: int = Field(..., ge=1)
    wins: int = Field(..., ge=0)
    winrate: float
    ci_half_width: float
    mean_rounds: float
    loss_reasons: Dict[str, int] = Field(default_factory=dict)
    master_seed: int

    @model_validator(mode="after")
    def check_wins(self) -> "EvalReport":
        if self.wins > self.games:
            raise ValueError("wins cannot exceed games")
        return self

    def percent(self) -> str:
        """Render as ``28.3 ± 0.9``."""
        return f"{100 * self.winrate:.1f} ± {100 * self.ci_half_width:.1f}"


class GridRow(BaseModel):
    """One agent setup of the multi-agent grid."""

    planning: str
    questing: str
    defense: str
    report: EvalReport


class GridReport(BaseModel):
    """Seven-row multi-agent comparison."""

    difficulty: int
    games: int
    master_seed: int
    train_episodes: int = 0
    rows: List[GridRow]

    def render_table(self) -> str:
        lines = [
            f"{'planning':<10}{'questing':<10}{'defense':<10}| winrate",
            "-" * 42,
        ]
        for row in self.rows:
            lines.append(
                f"{row.planning:<10}{row.questing:<10}{row.defense:<10}| {row.report.percent()}"
            )
        return "\n".join(lines) + "\n"


class HpoSpace(BaseModel):
    """Random-search space and trial protocol."""

    model_config = ConfigDict(frozen=True)

    neurons_min: int = Field(30, ge=1)
    neurons_max: int = Field(150, ge=1)
    lr_min: float = Field(1e-4, gt=0)
    lr_max: float = Field(1e-3, gt=0)
    encodings: List[int] = Field(default_factory=lambda: [0, 1, 2, 3])
    episodes: int = Field(10000, ge=1)
    window: int = Field(1000, ge=1)
    difficulty: int = Field(8, ge=1, le=20)
    eval_games: int = Field(1000, ge=0)

    @field_validator("encodings")
    @classmethod
    def check_encodings(cls, v: List[int]) -> List[int]:
        if not v or any(e not in (0, 1, 2, 3) for e in v):
            raise ValueError("encodings must be a non-empty subset of 0..3")
        return v

    @model_validator(mode="after")
    def check_ranges(self) -> "HpoSpace":
        if self.neurons_min > self.neurons_max or self.lr_min > self.lr_max:
            raise ValueError("empty search range")
        if self.window > self.episodes:
            raise ValueError("window exceeds episodes")
        return self


class HpoTrial(BaseModel):
    """One sampled configuration and its score."""

    index: int
    seed: int
    hidden_dim: int
    learning_rate: float
    encoding: int
    score: float = Field(..., ge=-1.0, le=1.0)
    episodes: int
    winrate: Optional[float] = None
    ci_half_width: Optional[float] = None


class SweepReport(BaseModel):
    """One assignment evaluated across several difficulties."""

    assignment: str
    master_seed: int
    reports: List[EvalReport]

    def render_table(self) -> str:
        lines = [f"{'difficulty':<12}| winrate"]
        for report in self.reports:
            lines.append(f"{report.difficulty:<12}| {report.percent()}")
        return "\n".join(lines) + "\n"


class HpoReport(BaseModel):
    """Ranked random-search trials, best score first."""

    space: HpoSpace
    seed: int
    trials: List[HpoTrial] = Field(default_factory=list)

    def render_table(self) -> str:
        lines = [f"{'rank':<6}{'neurons':<9}{'lr':<10}{'encoding':<10}{'score':<9}winrate"]
        for rank, trial in enumerate(self.trials, start=1):
            winrate = (
                f"{100 * trial.winrate:.1f} ± {100 * trial.ci_half_width:.1f}"
                if trial.winrate is not None
                else "-"
            )
            lines.append(
                f"{rank:<6}{trial.hidden_dim:<9}{trial.learning_rate:<10.1e}{trial.encoding:<10}"
                f"{trial.score:<9.3f}{winrate}"
            )
        return "\n".join(lines) + "\n"
