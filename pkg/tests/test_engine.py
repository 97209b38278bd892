"""Round state machine: phase rules, outcomes and game-level invariants."""

import pytest

from app.adapters.agent.base import ActionHead
from app.exceptions import (
    AttackerNotEngaged,
    ConfigError,
    DoubleAssignment,
    InvalidDefender,
    NotInHand,
    NotOnTable,
    NotReady,
    TransientCommit,
    Unaffordable,
    WrongPhase,
)
from app.models.game import ActiveLocation, CharacterInPlay, EncodingScheme, Outcome, Phase, dump_state
from app.schemas.game import GameConfig
from app.services import decoder
from app.services.encoder import StateEncoder
from tests.factories import CoinAgent, characters, engaged


class TestNewGame:
    def test_initial_state(self, engine, deck):
        state = engine.new_game(GameConfig(difficulty=20, seed=1), deck)
        assert len(state.hand) == 6
        assert [c.card for c in state.table] == [0, 1, 2]
        assert all(c.ready and c.damage == 0 for c in state.table)
        assert (state.round, state.phase, state.threat_level, state.resource_pool) == (1, Phase.RESOURCE, 28, 0)
        assert state.staging_area == [] and state.engagement_area == []
        assert state.quest_progress == 0 and state.outcome is Outcome.ONGOING

    def test_same_seed_same_state(self, engine, deck):
        first = engine.new_game(GameConfig(difficulty=20, seed=7), deck)
        second = engine.new_game({"difficulty": 20, "seed": 7}, deck)
        assert dump_state(first) == dump_state(second)

    def test_different_seed_different_shuffle(self, engine, deck):
        first = engine.new_game(GameConfig(difficulty=20, seed=7), deck)
        second = engine.new_game(GameConfig(difficulty=20, seed=8), deck)
        assert first.player_deck + first.hand != second.player_deck + second.hand

    @pytest.mark.parametrize("difficulty", [0, 21])
    def test_difficulty_out_of_range(self, engine, deck, difficulty):
        with pytest.raises(ConfigError):
            engine.new_game({"difficulty": difficulty, "seed": 0}, deck)

    def test_every_card_in_one_zone(self, engine, deck):
        state = engine.new_game(GameConfig(difficulty=20, seed=3), deck)
        assert sorted(state.player_cards()) == sorted(deck.expand() + [0, 1, 2])
        assert len(state.encounter_cards()) == 42


class TestResourcePhase:
    def test_income_per_hero(self, engine, make_state):
        state = make_state(Phase.RESOURCE)
        engine.resource_phase(state)
        assert state.resource_pool == 3
        assert state.phase is Phase.PLANNING

    def test_income_with_dead_hero(self, engine, make_state):
        state = make_state(Phase.RESOURCE, resource_pool=2, table=characters(0, 1))
        engine.resource_phase(state)
        assert state.resource_pool == 4

    def test_draw(self, engine, make_state):
        state = make_state(Phase.RESOURCE, hand=[], player_deck=[5, 6])
        engine.resource_phase(state)
        assert state.hand == [5] and state.player_deck == [6]
        assert state.random_events == 1

    def test_empty_deck_draw_is_noop(self, engine, make_state):
        state = make_state(Phase.RESOURCE, hand=[3], player_deck=[])
        engine.resource_phase(state)
        assert state.hand == [3] and state.resource_pool == 3


class TestPlanning:
    def test_table_one_loop(self, engine, make_state):
        state = make_state(hand=[3, 8, 9, 16], resource_pool=5)
        engine.apply_planning(state, 9)
        assert state.resource_pool == 3 and state.table[-1].card == 9
        engine.apply_planning(state, 3)
        assert state.resource_pool == 0
        assert [c.card for c in state.table] == [0, 1, 2, 9, 3]
        assert state.hand == [8, 16]
        assert engine.affordable_cards(state) == []

    def test_unaffordable(self, engine, make_state):
        state = make_state(hand=[8], resource_pool=0)
        with pytest.raises(Unaffordable):
            engine.apply_planning(state, 8)

    def test_not_in_hand(self, engine, make_state):
        with pytest.raises(NotInHand):
            engine.apply_planning(make_state(hand=[3], resource_pool=5), 9)

    def test_wrong_phase(self, engine, make_state):
        with pytest.raises(WrongPhase):
            engine.apply_planning(make_state(Phase.QUESTING, hand=[9], resource_pool=5), 9)

    def test_affordable_cards(self, engine, make_state):
        assert engine.affordable_cards(make_state(hand=[16, 9, 8, 3, 9], resource_pool=5)) == [3, 8, 9, 16]
        assert engine.affordable_cards(make_state(hand=[8, 16], resource_pool=0)) == []
        assert engine.affordable_cards(make_state(hand=[], resource_pool=5)) == []

    def test_end_planning(self, engine, make_state):
        state = make_state()
        engine.end_planning(state)
        assert state.phase is Phase.QUESTING


class TestQuesting:
    def test_combined_threat(self, engine, make_state):
        assert engine.combined_threat(make_state(staging_area=[])) == 0
        assert engine.combined_threat(make_state(staging_area=[22, 28, 30])) == 7
        assert engine.combined_threat(make_state(staging_area=[22, 28, 30, 37])) == 8

    def test_shortfall_raises_threat(self, engine, make_state):
        # heroes 1 + 2 commit 5 willpower against 7 threat
        state = make_state(Phase.QUESTING, staging_area=[22, 28, 30], quest_progress=4)
        engine.questing_phase(state, [1, 2])
        assert state.threat_level == 30
        assert state.quest_progress == 4
        assert state.phase is Phase.TRAVEL

    def test_tie_changes_nothing(self, engine, make_state):
        state = make_state(Phase.QUESTING, staging_area=[22, 28, 30], quest_progress=4)
        engine.questing_phase(state, [0, 1, 2])
        assert (state.threat_level, state.quest_progress) == (28, 4)

    def test_surplus_wins(self, engine, make_state):
        state = make_state(
            Phase.QUESTING,
            difficulty=8,
            table=characters(0, 1, 2, 5),
            staging_area=[22, 28, 30],
            quest_progress=6,
        )
        engine.questing_phase(state, [0, 1, 2, 5])
        assert state.quest_progress == 8
        assert state.outcome is Outcome.WIN
        assert state.phase is Phase.QUESTING

    def test_commit_exhausts(self, engine, make_state):
        state = make_state(Phase.QUESTING)
        engine.questing_phase(state, [2])
        hero = state.table[2]
        assert hero.exhausted and hero.committed
        assert state.table[0].ready

    def test_progress_explores_location_first(self, engine, make_state):
        # 7 willpower, no threat; location 38 needs 4
        state = make_state(Phase.QUESTING, active_location=ActiveLocation(card=38, progress=0))
        engine.questing_phase(state, [0, 1, 2])
        assert state.active_location is None
        assert state.encounter_discard == [38]
        assert state.quest_progress == 3

    def test_progress_partially_explores(self, engine, make_state):
        state = make_state(Phase.QUESTING, active_location=ActiveLocation(card=38, progress=0))
        engine.questing_phase(state, [1])
        assert state.active_location.progress == 1
        assert state.quest_progress == 0

    def test_reveal(self, engine, make_state):
        state = make_state(Phase.QUESTING, encounter_deck=[23, 37])
        engine.questing_phase(state, [])
        assert state.staging_area == [23] and state.encounter_deck == [37]
        assert state.random_events == 1

    def test_reveal_reshuffles_discard(self, engine, make_state):
        state = make_state(Phase.QUESTING, encounter_deck=[], encounter_discard=[24])
        engine.questing_phase(state, [])
        assert state.staging_area == [24]
        assert state.encounter_discard == []

    def test_threat_loss(self, engine, make_state):
        state = make_state(Phase.QUESTING, threat_level=48, staging_area=[22])
        engine.questing_phase(state, [])
        assert state.threat_level == 50
        assert state.outcome is Outcome.LOSS_THREAT

    def test_not_on_table(self, engine, make_state):
        with pytest.raises(NotOnTable):
            engine.questing_phase(make_state(Phase.QUESTING), [5])

    def test_transient_commit(self, engine, make_state):
        with pytest.raises(TransientCommit):
            engine.questing_phase(make_state(Phase.QUESTING, table=characters(0, 1, 2, 18)), [18])

    def test_exhausted_commit(self, engine, make_state):
        with pytest.raises(NotReady):
            engine.questing_phase(make_state(Phase.QUESTING, table=characters(0, 1, 2, exhausted=[0])), [0])

    def test_same_copy_twice(self, engine, make_state):
        with pytest.raises(NotReady):
            engine.questing_phase(make_state(Phase.QUESTING), [0, 0])

    def test_two_copies(self, engine, make_state):
        state = make_state(Phase.QUESTING, table=characters(0, 1, 2, 9, 9))
        engine.questing_phase(state, [9, 9])
        assert all(c.committed for c in state.table if c.card == 9)

    def test_failed_validation_leaves_state(self, engine, make_state):
        state = make_state(Phase.QUESTING)
        with pytest.raises(NotOnTable):
            engine.questing_phase(state, [0, 5])
        assert all(c.ready for c in state.table)
        assert state.random_events == 0


class TestTravelAndEncounter:
    def test_highest_threat_land(self, engine, make_state):
        state = make_state(Phase.TRAVEL, staging_area=[37, 40, 22])
        engine.travel_phase(state)
        assert state.active_location.card == 40
        assert sorted(state.staging_area) == [22, 37]
        assert state.phase is Phase.ENCOUNTER

    def test_threat_tie_lowest_id(self, engine, make_state):
        state = make_state(Phase.TRAVEL, staging_area=[41, 38])
        engine.travel_phase(state)
        assert state.active_location.card == 38

    def test_active_location_kept(self, engine, make_state):
        state = make_state(Phase.TRAVEL, staging_area=[40], active_location=ActiveLocation(card=37))
        engine.travel_phase(state)
        assert state.active_location.card == 37 and state.staging_area == [40]

    def test_no_lands(self, engine, make_state):
        state = make_state(Phase.TRAVEL, staging_area=[22])
        engine.travel_phase(state)
        assert state.active_location is None

    def test_engagement_cost(self, engine, make_state):
        state = make_state(Phase.ENCOUNTER, threat_level=30, staging_area=[22, 27])
        engine.encounter_phase(state)
        assert [e.card for e in state.engagement_area] == [22]
        assert state.staging_area == [27]
        assert state.phase is Phase.DEFENSE

    def test_engagement_order(self, engine, make_state):
        state = make_state(Phase.ENCOUNTER, threat_level=30, staging_area=[28, 23, 37])
        engine.encounter_phase(state)
        assert [e.card for e in state.engagement_area] == [23, 28]
        assert state.staging_area == [37]


class TestDefense:
    def test_defended_attack(self, engine, make_state):
        state = make_state(Phase.DEFENSE, engagement_area=engaged(23))
        engine.defense_phase(state, {0: 1})
        hero = state.table[1]
        assert hero.damage == 2 and hero.exhausted
        assert state.phase is Phase.ATTACK

    def test_defense_absorbs(self, engine, make_state):
        state = make_state(Phase.DEFENSE, engagement_area=engaged(24))
        engine.defense_phase(state, {0: 0})
        assert state.table[0].damage == 0

    def test_undefended_hits_healthiest_hero(self, engine, make_state):
        state = make_state(Phase.DEFENSE, engagement_area=engaged(24))
        engine.defense_phase(state, {0: None})
        assert [c.damage for c in state.table] == [1, 0, 0]
        assert all(c.ready for c in state.table)

    def test_last_hero_dies(self, engine, make_state):
        state = make_state(Phase.DEFENSE, table=characters(0), engagement_area=engaged(34))
        engine.defense_phase(state, {})
        assert state.table == []
        assert state.player_discard == [0]
        assert state.outcome is Outcome.LOSS_HEROES_DEAD

    def test_attack_order_by_id(self, engine, make_state):
        state = make_state(Phase.DEFENSE, engagement_area=engaged(28, 22, 23))
        assert engine.attack_order(state) == [1, 2, 0]

    def test_defender_picks_healthiest_copy(self, engine, make_state):
        table = characters(0, 1, 2, 9, 9)
        table[3].damage = 1
        state = make_state(Phase.DEFENSE, table=table, engagement_area=engaged(24))
        engine.defense_phase(state, {0: 9})
        assert table[4].exhausted and not table[3].exhausted

    def test_destroyed_defender_leaves_play(self, engine, make_state):
        state = make_state(Phase.DEFENSE, table=characters(0, 1, 2, 7), engagement_area=engaged(23))
        engine.defense_phase(state, {0: 7})
        assert 7 not in [c.card for c in state.table]
        assert state.player_discard == [7]

    def test_invalid_defender(self, engine, make_state):
        with pytest.raises(InvalidDefender):
            engine.defense_phase(make_state(Phase.DEFENSE, engagement_area=engaged(23)), {0: 5})

    def test_committed_defender(self, engine, make_state):
        table = characters(0, 1, 2)
        table[0] = CharacterInPlay(card=0, exhausted=True, committed=True)
        state = make_state(Phase.DEFENSE, table=table, engagement_area=engaged(23))
        with pytest.raises(InvalidDefender):
            engine.defense_phase(state, {0: 0})

    def test_double_assignment(self, engine, make_state):
        state = make_state(Phase.DEFENSE, engagement_area=engaged(23, 24))
        with pytest.raises(DoubleAssignment):
            engine.defense_phase(state, {0: 0, 1: 0})

    def test_unknown_attacker(self, engine, make_state):
        with pytest.raises(AttackerNotEngaged):
            engine.defense_phase(make_state(Phase.DEFENSE, engagement_area=engaged(23)), {3: 0})


class TestAttack:
    def test_weakest_enemy_destroyed(self, engine, make_state):
        # heroes 0 and 2 strike for 4 against King Spider (defense 1, hp 3)
        state = make_state(
            Phase.ATTACK,
            table=characters(0, 1, 2, exhausted=[1]),
            engagement_area=engaged(22, 28),
        )
        engine.attack_phase(state)
        assert [e.card for e in state.engagement_area] == [22]
        assert state.encounter_discard == [28]
        assert all(c.exhausted for c in state.table)
        assert state.phase is Phase.REFRESH

    def test_defense_absorbs_attack(self, engine, make_state):
        state = make_state(Phase.ATTACK, table=characters(0, 1, 2, exhausted=[0, 1]), engagement_area=engaged(27))
        engine.attack_phase(state)
        assert state.engagement_area[0].damage == 0

    def test_no_ready_characters(self, engine, make_state):
        state = make_state(Phase.ATTACK, table=characters(0, 1, 2, exhausted=[0, 1, 2]), engagement_area=engaged(35))
        engine.attack_phase(state)
        assert state.engagement_area[0].damage == 0
        assert state.phase is Phase.REFRESH


class TestRefresh:
    def test_threat_boundary(self, engine, make_state):
        state = make_state(Phase.REFRESH, threat_level=49)
        engine.refresh_phase(state)
        assert state.threat_level == 50
        assert state.outcome is Outcome.LOSS_THREAT

    def test_readies_and_advances(self, engine, make_state):
        state = make_state(Phase.REFRESH, table=characters(0, 1, 2, 16, 18, exhausted=[0, 16]))
        engine.refresh_phase(state)
        assert [c.card for c in state.table] == [0, 1, 2, 16]
        assert all(c.ready for c in state.table)
        assert state.player_discard == [18]
        assert (state.round, state.threat_level, state.phase) == (2, 29, Phase.RESOURCE)

    def test_timeout(self, engine, make_state):
        state = make_state(Phase.REFRESH, round=72)
        engine.refresh_phase(state)
        assert state.outcome is Outcome.LOSS_TIMEOUT

    def test_no_phase_after_game_over(self, engine, make_state):
        state = make_state(Phase.REFRESH, threat_level=49)
        engine.refresh_phase(state)
        with pytest.raises(WrongPhase):
            engine.resource_phase(state)

    def test_out_of_phase(self, engine, make_state):
        with pytest.raises(WrongPhase):
            engine.travel_phase(make_state(Phase.RESOURCE))


def play_checked(engine, deck, difficulty, seed):
    """Random game stepped phase by phase with invariant checks after each step."""
    state = engine.new_game(GameConfig(difficulty=difficulty, seed=seed), deck)
    encoder = StateEncoder(engine)
    planner = CoinAgent(ActionHead.CATEGORICAL, seed)
    quester = CoinAgent(ActionHead.MASK, seed + 1)
    defender = CoinAgent(ActionHead.CATEGORICAL, seed + 2)
    player_cards = sorted(state.player_cards())
    encounter_cards = sorted(state.encounter_cards())
    last_progress, last_round = 0, 0

    def check():
        nonlocal last_progress
        assert sorted(state.player_cards()) == player_cards
        assert sorted(state.encounter_cards()) == encounter_cards
        assert state.resource_pool >= 0
        assert state.quest_progress >= last_progress
        last_progress = state.quest_progress
        for character in state.table:
            assert character.damage < engine.db[character.card].hit_points

    while not state.is_over:
        assert state.phase is Phase.RESOURCE
        assert state.round > last_round
        last_round = state.round
        assert state.random_events == 2 * (state.round - 1)
        engine.resource_phase(state)
        decoder.direct_planning_loop(engine, state, planner, encoder)
        engine.end_planning(state)
        decoder.direct_questing(engine, state, quester, encoder, EncodingScheme.QUESTING2)
        check()
        if state.is_over:
            break
        engine.travel_phase(state)
        engine.encounter_phase(state)
        decoder.direct_defense(engine, state, defender, encoder)
        check()
        if state.is_over:
            break
        engine.attack_phase(state)
        engine.refresh_phase(state)
        check()
    return state


def check_outcome(engine, state):
    assert state.round <= state.max_rounds + 1
    if state.outcome is Outcome.WIN:
        assert state.quest_progress >= state.difficulty
    elif state.outcome is Outcome.LOSS_THREAT:
        assert state.threat_level >= state.threat_limit
    elif state.outcome is Outcome.LOSS_HEROES_DEAD:
        assert engine.heroes_alive(state) == 0
    else:
        assert state.outcome is Outcome.LOSS_TIMEOUT


@pytest.mark.parametrize("difficulty", [1, 8, 20])
@pytest.mark.parametrize("seed", range(15))
def test_random_games_keep_invariants(engine, deck, difficulty, seed):
    state = play_checked(engine, deck, difficulty, seed)
    check_outcome(engine, state)


def test_seeded_replay_is_identical(engine, deck):
    first = play_checked(engine, deck, 8, 42)
    second = play_checked(engine, deck, 8, 42)
    assert dump_state(first) == dump_state(second)


@pytest.mark.slow
@pytest.mark.parametrize("difficulty", [1, 8, 20])
def test_random_game_fuzz(engine, deck, difficulty):
    for seed in range(3334):
        check_outcome(engine, play_checked(engine, deck, difficulty, seed))
