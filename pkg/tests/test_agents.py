"""Actor-critic and random baseline policies."""

import numpy as np
import pytest
from scipy import stats

from app.adapters.agent.actor_critic import ActorCriticAgent, log_prob, log_prob_gradient
from app.adapters.agent.base import ActionHead, Transition, action_space, episode_credit
from app.adapters.agent.uniform import RandomAgent
from app.core.neural import Mlp
from app.exceptions import EmptyMask
from app.models.game import EncodingScheme
from app.schemas.evaluation import PolicyKind, Role
from app.services import decoder


def constant_critic(input_dim, value, hidden_dim=3):
    return Mlp(
        np.zeros((hidden_dim, input_dim)),
        np.zeros(hidden_dim),
        np.zeros((1, hidden_dim)),
        np.full(1, value),
    )


def zero_actor(input_dim, output_dim, hidden_dim=3):
    return Mlp(
        np.zeros((hidden_dim, input_dim)),
        np.zeros(hidden_dim),
        np.zeros((output_dim, hidden_dim)),
        np.zeros(output_dim),
    )


def agent_with(actor, critic, head=ActionHead.CATEGORICAL, **kwargs):
    return ActorCriticAgent(Role.PLANNING, EncodingScheme.PLANNING, head, actor, critic, **kwargs)


def parameters(agent):
    return [a.copy() for a in agent.actor.arrays() + agent.critic.arrays()]


class TestActionSpace:
    @pytest.mark.parametrize(
        "role, kind, encoding, expected",
        [
            (Role.PLANNING, PolicyKind.RL_MACRO, 2, (EncodingScheme.PLANNING, ActionHead.CATEGORICAL, 6)),
            (Role.PLANNING, PolicyKind.RL_DIRECT, 2, (EncodingScheme.PLANNING, ActionHead.CATEGORICAL, 18)),
            (Role.QUESTING, PolicyKind.RL_MACRO, 1, (EncodingScheme.QUESTING1, ActionHead.CATEGORICAL, 6)),
            (Role.QUESTING, PolicyKind.RL_DIRECT, 3, (EncodingScheme.QUESTING3, ActionHead.MASK, 18)),
            (Role.DEFENSE, PolicyKind.RL_DIRECT, 2, (EncodingScheme.DEFENSE, ActionHead.CATEGORICAL, 19)),
        ],
    )
    def test_table(self, role, kind, encoding, expected):
        assert tuple(action_space(role, kind, encoding)) == expected


class TestTransition:
    def test_terminal(self):
        t = Transition(np.zeros(2), 0, np.ones(2, bool), -1, None, True)
        assert t.done and t.next_state is None

    @pytest.mark.parametrize(
        "reward, next_state, done",
        [(1, np.zeros(2), True), (0, None, True), (0, None, False), (1, np.zeros(2), False)],
    )
    def test_invalid(self, reward, next_state, done):
        with pytest.raises(ValueError):
            Transition(np.zeros(2), 0, np.ones(2, bool), reward, next_state, done)


class TestRandomAgent:
    def test_uniform_over_legal(self):
        agent = RandomAgent()
        rng = np.random.default_rng(0)
        mask = np.zeros(18, dtype=bool)
        legal = [1, 4, 5, 9, 12, 17]
        mask[legal] = True
        draws = [agent.act(None, mask, rng)[0] for _ in range(10_000)]
        assert set(draws) == set(legal)
        counts = np.bincount(draws, minlength=18)[legal]
        assert stats.chisquare(counts).pvalue > 0.001
        expected = 10_000 / len(legal)
        sigma = np.sqrt(10_000 * (1 / 6) * (5 / 6))
        assert np.all(np.abs(counts - expected) < 3 * sigma)

    def test_categorical_logprob(self):
        mask = np.array([True, False, True, True])
        _, logprob = RandomAgent().act(None, mask, np.random.default_rng(1))
        assert logprob == pytest.approx(-np.log(3))

    def test_empty_mask(self):
        with pytest.raises(EmptyMask):
            RandomAgent().act(None, np.zeros(4, bool), np.random.default_rng(0))

    def test_coin_per_legal_slot(self):
        agent = RandomAgent(ActionHead.MASK)
        rng = np.random.default_rng(2)
        mask = np.zeros(18, dtype=bool)
        mask[[0, 1, 2, 7]] = True
        draws = np.array([agent.act(None, mask, rng)[0] for _ in range(10_000)])
        assert not draws[:, ~mask].any()
        np.testing.assert_allclose(draws[:, mask].mean(axis=0), 0.5, atol=0.03)
        _, logprob = agent.act(None, mask, rng)
        assert logprob == pytest.approx(-4 * np.log(2))

    def test_coin_without_legal_slot(self):
        bits, logprob = RandomAgent(ActionHead.MASK).act(None, np.zeros(18, bool), np.random.default_rng(0))
        assert not bits.any()
        assert logprob == 0


class TestAct:
    def test_zeroed_macro_head_is_uniform(self):
        agent = agent_with(zero_actor(4, 6), constant_critic(4, 0.0))
        rng = np.random.default_rng(3)
        draws = [agent.act(np.ones(4), np.ones(6, bool), rng)[0] for _ in range(10_000)]
        counts = np.bincount(draws, minlength=6)
        assert stats.chisquare(counts).pvalue > 0.001

    def test_pass_only(self):
        agent = ActorCriticAgent.create(
            Role.PLANNING, EncodingScheme.PLANNING, ActionHead.CATEGORICAL, 5, decoder.PLANNING_ACTIONS, 4, seed=0
        )
        mask = np.zeros(decoder.PLANNING_ACTIONS, dtype=bool)
        mask[decoder.PLANNING_PASS] = True
        action, logprob = agent.act(np.ones(5), mask, np.random.default_rng(0))
        assert action == decoder.PLANNING_PASS
        assert logprob == 0

    def test_questing_head_without_legal_slot(self):
        agent = ActorCriticAgent.create(
            Role.QUESTING, EncodingScheme.QUESTING0, ActionHead.MASK, 5, decoder.QUESTING_SLOTS, 4, seed=0
        )
        bits, logprob = agent.act(np.ones(5), np.zeros(18, bool), np.random.default_rng(0))
        assert not bits.any()
        assert logprob == 0

    @pytest.mark.parametrize("head", list(ActionHead))
    def test_logprob_matches_distribution(self, head):
        agent = ActorCriticAgent.create(Role.QUESTING, EncodingScheme.QUESTING0, head, 6, 8, 5, seed=4)
        rng = np.random.default_rng(4)
        for _ in range(50):
            features = rng.normal(size=6)
            mask = rng.random(8) < 0.6
            mask[0] = True
            action, logprob = agent.act(features, mask, rng)
            assert logprob == pytest.approx(log_prob(agent.actor.predict(features), head, action, mask))

    @pytest.mark.parametrize("head", list(ActionHead))
    def test_never_selects_masked_option(self, head):
        agent = ActorCriticAgent.create(Role.DEFENSE, EncodingScheme.DEFENSE, head, 6, 19, 5, seed=5)
        rng = np.random.default_rng(5)
        for _ in range(2000):
            mask = rng.random(19) < 0.3
            mask[rng.integers(19)] = True
            action, _ = agent.act(rng.integers(0, 3, size=6), mask, rng)
            if head is ActionHead.CATEGORICAL:
                assert mask[action]
            else:
                assert not (action & ~mask).any()


class TestTdError:
    def test_terminal_win(self):
        agent = agent_with(zero_actor(3, 2), constant_critic(3, 0.3))
        t = Transition(np.ones(3), 0, np.ones(2, bool), 1, None, True)
        assert agent.td_error(t) == pytest.approx(0.7)

    def test_bootstrapped(self):
        agent = agent_with(zero_actor(3, 2), constant_critic(3, 0.5), gamma=0.99)
        t = Transition(np.ones(3), 0, np.ones(2, bool), 0, np.zeros(3), False)
        assert agent.td_error(t) == pytest.approx(-0.005)

    def test_zero_critic(self):
        agent = agent_with(zero_actor(3, 2), constant_critic(3, 0.0))
        t = Transition(np.ones(3), 1, np.ones(2, bool), 0, np.ones(3), False)
        assert agent.td_error(t) == 0


class TestObserve:
    def test_zero_delta_changes_nothing(self):
        agent = agent_with(Mlp.init(3, 4, 2, seed=0), constant_critic(3, 0.0))
        before = parameters(agent)
        agent.observe(Transition(np.ones(3), 1, np.ones(2, bool), 0, np.ones(3), False))
        for left, right in zip(parameters(agent), before):
            np.testing.assert_array_equal(left, right)
        assert agent.updates == 1

    def test_single_parameter_critic(self):
        critic = Mlp(np.ones((1, 1)), np.zeros(1), np.zeros((1, 1)), np.zeros(1))
        agent = agent_with(zero_actor(1, 2), critic, alpha_actor=0.0, alpha_critic=0.1)
        agent.observe(Transition(np.ones(1), 0, np.ones(2, bool), 1, None, True))
        assert agent.critic.w2[0, 0] == pytest.approx(0.1)
        assert agent.critic.w1[0, 0] == 1.0
        assert not agent.actor.arrays()[2].any()

    @pytest.mark.parametrize("head", list(ActionHead))
    def test_positive_delta_raises_logprob(self, head):
        rng = np.random.default_rng(6)
        for seed in range(20):
            agent = agent_with(
                Mlp.init(5, 6, 4, seed=seed), constant_critic(5, 0.0), head, alpha_actor=1e-3, alpha_critic=1e-3
            )
            features = rng.normal(size=5)
            mask = np.array([True, True, False, True])
            action, before = agent.act(features, mask, rng)
            agent.observe(Transition(features, action, mask, 1, None, True))
            after = log_prob(agent.actor.predict(features), head, action, mask)
            assert after >= before - 1e-12

    def test_frozen_agent_does_not_learn(self):
        agent = agent_with(Mlp.init(3, 4, 2, seed=0), Mlp.init(3, 4, 1, seed=1))
        agent.freeze()
        before = parameters(agent)
        agent.observe(Transition(np.ones(3), 0, np.ones(2, bool), 1, None, True))
        assert agent.updates == 0
        for left, right in zip(parameters(agent), before):
            np.testing.assert_array_equal(left, right)

    def test_copy_is_independent(self):
        agent = agent_with(Mlp.init(3, 4, 2, seed=0), Mlp.init(3, 4, 1, seed=1), alpha_actor=0.1, alpha_critic=0.1)
        clone = agent.copy()
        snapshot = parameters(clone)
        agent.observe(Transition(np.ones(3), 0, np.ones(2, bool), 1, None, True))
        for left, right in zip(parameters(clone), snapshot):
            np.testing.assert_array_equal(left, right)
        assert any(not np.array_equal(a, b) for a, b in zip(parameters(agent), snapshot))


class TestLogProbGradient:
    @pytest.mark.parametrize("head", list(ActionHead))
    def test_matches_finite_differences(self, head):
        rng = np.random.default_rng(7)
        eps = 1e-5
        for seed in range(30):
            actor = Mlp.init(4, 5, 6, seed=seed)
            actor.b1 += 0.3
            features = rng.normal(size=4)
            mask = rng.random(6) < 0.7
            mask[0] = True
            if head is ActionHead.CATEGORICAL:
                action = int(rng.choice(np.flatnonzero(mask)))
            else:
                action = (rng.random(6) < 0.5) & mask
            logits, trace = actor.forward(features)
            if np.abs(trace.z1).min() < 1e-3:
                continue
            grads = actor.backward(trace, log_prob_gradient(logits, head, action, mask)).arrays()
            for param, grad in zip(actor.arrays(), grads):
                for index in np.ndindex(param.shape):
                    saved = param[index]
                    param[index] = saved + eps
                    plus = log_prob(actor.predict(features), head, action, mask)
                    param[index] = saved - eps
                    minus = log_prob(actor.predict(features), head, action, mask)
                    param[index] = saved
                    assert grad[index] == pytest.approx((plus - minus) / (2 * eps), rel=1e-4, abs=1e-7)

    def test_masked_slots_get_no_gradient(self):
        logits = np.array([0.3, -1.0, 2.0])
        mask = np.array([True, False, True])
        for head, action in ((ActionHead.CATEGORICAL, 2), (ActionHead.MASK, np.array([True, True, False]))):
            assert log_prob_gradient(logits, head, action, mask)[1] == 0


class TestEpisodeCredit:
    def test_examples(self):
        assert episode_credit([1]) == 1
        assert episode_credit([1, -1]) == 0
        assert episode_credit([]) == 0

    def test_matches_batch_mean(self):
        rewards = np.random.default_rng(8).choice([-1, 1], size=5000)
        assert abs(episode_credit(rewards) - rewards.mean()) < 1e-12
