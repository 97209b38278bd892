"""Single learning runs, interruption and run logs."""

import pytest

from app.exceptions import ConfigError
from app.repositories.bundle import bundle_hash
from app.repositories.report import read_run_log, run_log_name, write_run_log
from app.schemas.evaluation import AssignmentSpec, Role
from app.schemas.training import InterruptRule, StopReason
from app.services.session import build_lineup
from app.services.training import LearningJob, run_learning, run_learning_job


@pytest.fixture
def random_lineup(settings):
    return build_lineup(AssignmentSpec(), settings)


@pytest.fixture
def learner(settings):
    return build_lineup(AssignmentSpec.parse("random,rl-direct:2,random"), settings, seed=3)


class TestRunLearning:
    def test_unreachable_threshold_uses_whole_budget(self, engine, deck, random_lineup, settings):
        record = run_learning(engine, deck, random_lineup, 8, 12, settings, 0, InterruptRule(window=5, threshold=2.0))
        assert record.stop_reason is StopReason.BUDGET
        assert record.episodes_used == 12
        assert len(record.trailing) == 12

    def test_trivial_threshold_stops_at_window(self, engine, deck, random_lineup, settings):
        record = run_learning(engine, deck, random_lineup, 8, 50, settings, 0, InterruptRule(window=5, threshold=-2.0))
        assert record.stop_reason is StopReason.THRESHOLD
        assert record.episodes_used == 5

    def test_threshold_on_last_episode_is_budget_stop(self, engine, deck, random_lineup, settings):
        record = run_learning(engine, deck, random_lineup, 8, 5, settings, 0, InterruptRule(window=5, threshold=-2.0))
        assert record.stop_reason is StopReason.BUDGET
        assert record.episodes_used == 5
        assert record.trailing[4] is not None

    def test_trailing_prefix(self, engine, deck, random_lineup, settings):
        record = run_learning(engine, deck, random_lineup, 8, 9, settings, 1)
        assert record.trailing[:4] == [None] * 4
        assert record.trailing[4] == pytest.approx(sum(record.rewards[:5]) / 5)
        assert record.trailing[8] == pytest.approx(sum(record.rewards[4:9]) / 5)
        assert set(record.rewards) <= {1, -1}
        assert record.wins == record.rewards.count(1)

    def test_seeded(self, engine, deck, settings):
        spec = AssignmentSpec.parse("rl-macro,rl-direct,rl-direct")
        first = run_learning(engine, deck, build_lineup(spec, settings, 4), 6, 8, settings, 11)
        second = run_learning(engine, deck, build_lineup(spec, settings, 4), 6, 8, settings, 11)
        assert first.rewards == second.rewards
        for role in Role:
            assert bundle_hash(first.lineup.agents()[role]) == bundle_hash(second.lineup.agents()[role])

    def test_trains_in_place(self, engine, deck, learner, settings):
        agent = learner.agents()[Role.QUESTING]
        before = bundle_hash(agent)
        record = run_learning(engine, deck, learner, 4, 5, settings, 2, label="inplace", iteration=3, parent="0→4")
        assert record.lineup is learner
        assert agent.updates > 0
        assert bundle_hash(agent) != before
        summary = record.summary()
        assert (summary.label, summary.iteration, summary.parent) == ("inplace", 3, "0→4")
        assert summary.episodes_used == 5

    @pytest.mark.parametrize(
        "difficulty, episodes, interrupt",
        [
            (8, 0, None),
            (0, 5, None),
            (21, 5, None),
            (8, 4, InterruptRule(window=5, threshold=0.0)),
        ],
    )
    def test_rejected_arguments(self, engine, deck, random_lineup, settings, difficulty, episodes, interrupt):
        with pytest.raises(ConfigError):
            run_learning(engine, deck, random_lineup, difficulty, episodes, settings, 0, interrupt)

    def test_job_wrapper(self, engine, deck, random_lineup, settings):
        job = LearningJob(engine, deck, random_lineup, 8, 6, settings, 7, label="job")
        direct = run_learning(engine, deck, build_lineup(AssignmentSpec(), settings), 8, 6, settings, 7)
        assert run_learning_job(job).rewards == direct.rewards


class TestRunLog:
    def test_write_and_read(self, engine, deck, random_lineup, settings, tmp_path):
        record = run_learning(engine, deck, random_lineup, 8, 7, settings, 5, label="step1_d8_i0")
        path = write_run_log(record, tmp_path / run_log_name(record))
        assert path.name == "step1_d8_i0.csv"
        assert path.read_text().splitlines()[0] == "episode,reward,win,trailing_avg"
        rows = read_run_log(path)
        assert [row.episode for row in rows] == list(range(1, 8))
        assert [row.reward for row in rows] == record.rewards
        assert [row.win for row in rows] == [int(r > 0) for r in record.rewards]
        assert rows[0].trailing_avg is None
        assert rows[-1].trailing_avg == pytest.approx(record.trailing[-1])

    def test_unsafe_label(self, engine, deck, random_lineup, settings):
        record = run_learning(engine, deck, random_lineup, 8, 1, settings, 0, label="grid-RL/random")
        assert run_log_name(record) == "grid-RL_random.csv"


@pytest.mark.slow
def test_long_run_row_count(engine, deck, learner, settings, tmp_path):
    record = run_learning(engine, deck, learner, 8, 2000, settings.model_copy(update={"interrupt_window": 100}), 0)
    assert len(read_run_log(write_run_log(record, tmp_path / "long.csv"))) == 2000
