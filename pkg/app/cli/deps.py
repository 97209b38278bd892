"""Shared command dependencies: settings, card data, engine and output paths."""

import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from app.config import Settings, load_settings
from app.exceptions import ConfigError
from app.logging_config import setup_logging
from app.models.card import CardDb, DeckSpec
from app.repositories.bundle import save_bundle
from app.repositories.card import load_card_db, load_deck_spec
from app.repositories.report import write_report, write_text
from app.schemas.evaluation import AssignmentSpec
from app.services.deck import validate_deck_spec
from app.services.engine import GameEngine
from app.services.session import Lineup


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """Global flags accepted by every subcommand."""
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--difficulty", type=int, default=None, help="quest points needed to win (1-20)")
    parser.add_argument("--config", type=Path, default=None, help="key = value settings file")
    parser.add_argument("--cards", type=Path, default=None, help="card database file")
    parser.add_argument("--deck", type=Path, default=None, help="player deck file")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    parser.add_argument("--workers", type=int, default=None, help="worker processes")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")


def parse_agents(text: Optional[str], default: str) -> AssignmentSpec:
    return AssignmentSpec.parse(text or default)


@dataclass
class CliContext:
    """Everything a command needs, built once from the global flags."""

    settings: Settings
    db: CardDb
    deck: DeckSpec
    engine: GameEngine
    out: Path
    seed: int

    @property
    def difficulty(self) -> int:
        return self.settings.difficulty

    def write_report(self, name: str, report) -> Path:
        return write_report(report, self.out / name)

    def write_text(self, name: str, text: str) -> Path:
        return write_text(self.out / name, text)

    def save_lineup(self, lineup: Lineup, prefix: str) -> None:
        """One bundle file per RL slot: ``bundles/<prefix>_<role>.bundle``."""
        for role, agent in lineup.agents().items():
            save_bundle(agent, self.out / "bundles" / f"{prefix}_{role.value}.bundle")


def build_context(args: argparse.Namespace) -> CliContext:
    """Load settings (file, then flags), configure logging, load card data."""
    if args.seed < 0:
        raise ConfigError("--seed must be non-negative", {"seed": args.seed})
    settings = load_settings(
        args.config,
        difficulty=args.difficulty,
        cards_path=args.cards,
        deck_path=args.deck,
        workers=args.workers,
        log_level=args.log_level,
    )
    setup_logging(settings.log_level)
    db = load_card_db(settings.cards_path, settings.encounter_copies_path)
    deck = load_deck_spec(settings.deck_path)
    validate_deck_spec(db, deck)
    return CliContext(
        settings=settings,
        db=db,
        deck=deck,
        engine=GameEngine(db),
        out=args.out,
        seed=args.seed,
    )
