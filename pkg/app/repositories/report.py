"""Run logs and report files under the output directory."""

from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from app.exceptions import DataError
from app.models.run import RunRecord
from app.repositories.base import CsvRepository


class RunLogRow(BaseModel):
    """One ``episode,reward,win,trailing_avg`` line."""

    model_config = ConfigDict(frozen=True)

    episode: int = Field(..., ge=1)
    reward: int = Field(..., ge=-1, le=1)
    win: int = Field(..., ge=0, le=1)
    trailing_avg: Optional[float] = None


class RunLogRepository(CsvRepository[RunLogRow]):
    """Per-run learning curve."""

    header = ("episode", "reward", "win", "trailing_avg")

    def __init__(self):
        super().__init__(RunLogRow)

    def rows(self, record: RunRecord) -> List[RunLogRow]:
        return [
            RunLogRow(episode=i + 1, reward=reward, win=int(reward > 0), trailing_avg=trailing)
            for i, (reward, trailing) in enumerate(zip(record.rewards, record.trailing))
        ]


def write_text(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"Cannot write {path}", {"error": str(exc)})
    return path


def write_run_log(record: RunRecord, path: Union[str, Path]) -> Path:
    repository = RunLogRepository()
    return write_text(path, repository.dump(repository.rows(record)))


def read_run_log(path: Union[str, Path]) -> List[RunLogRow]:
    return [row for _, row in RunLogRepository().load(path)]


def write_report(report: BaseModel, path: Union[str, Path]) -> Path:
    """Write a report model as indented JSON."""
    return write_text(path, report.model_dump_json(indent=2) + "\n")


def run_log_name(record: RunRecord) -> str:
    """File name for a run log: label made path-safe."""
    safe = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in record.label)
    return f"{safe}.csv"
