import math
import random

import pytest

from crypto.group import order_divides
from game.adversaries import (ADVERSARIES, BackdoorAdversary, CoinFlipAdversary, FuzzingAdversary,
                              RevokedUserAdversary)
from game.assumptions import assumption1_instance, assumption2_instance, assumption3_instance
from game.indcpa import (PHASE_TWO, Challenger, GameConfig, check_transcript, estimate_advantage,
                         run_game)
from scheme.errors import ParameterError, RestrictionViolated


@pytest.fixture
def challenger(descriptor24):
    return Challenger(GameConfig(), random.Random(5), descriptor=descriptor24)


def messages(oracle):
    rng = random.Random(6)
    return oracle.random_message(rng), oracle.random_message(rng)


def within_three_sigma(estimate):
    return estimate.advantage <= 3 * 0.5 / math.sqrt(estimate.trials)


def test_registry():
    assert set(ADVERSARIES) == {"coin", "backdoor", "revoked"}


def test_duplicate_user_rejected(challenger):
    challenger.private_key_query("a", 1)
    with pytest.raises(RestrictionViolated) as info:
        challenger.private_key_query("b", 1)
    assert info.value.rule == RestrictionViolated.DUPLICATE_USER
    assert challenger.transcript.rejected == (1, RestrictionViolated.DUPLICATE_USER)
    # nothing is served after a rejection
    with pytest.raises(RestrictionViolated):
        challenger.update_key_query(0, [])


def test_duplicate_time_rejected(challenger):
    challenger.update_key_query(3, [1])
    with pytest.raises(RestrictionViolated) as info:
        challenger.update_key_query(3, [2])
    assert info.value.rule == RestrictionViolated.DUPLICATE_TIME
    assert info.value.query_index == 1


def test_challenge_condition(challenger):
    challenger.private_key_query("a", 1)
    challenger.update_key_query(3, [])
    m0, m1 = messages(challenger)
    with pytest.raises(RestrictionViolated) as info:
        challenger.challenge(m0, m1, {"a"}, 2)
    assert info.value.rule == RestrictionViolated.CHALLENGE
    assert info.value.query_index == 2


def test_challenge_allowed_when_every_pair_fails(challenger):
    challenger.private_key_query("a", 1)
    challenger.update_key_query(3, [1])
    challenger.update_key_query(1, [])
    challenger.private_key_query("b", 2)
    m0, m1 = messages(challenger)
    ct = challenger.challenge(m0, m1, {"a"}, 2)
    assert ct.time == 2
    assert challenger.phase == PHASE_TWO
    with pytest.raises(ParameterError):
        challenger.challenge(m0, m1, {"a"}, 2)


def test_out_of_range_challenge_time_leaves_state(challenger):
    challenger.private_key_query("b", 2)
    m0, m1 = messages(challenger)
    with pytest.raises(ParameterError):
        challenger.challenge(m0, m1, {"a"}, 7)
    assert challenger.transcript.challenge is None
    assert challenger.transcript.b is None
    assert challenger.transcript.rejected is None
    assert challenger.phase != PHASE_TWO
    ct = challenger.challenge(m0, m1, {"a"}, 6)
    assert ct.time == 6
    assert challenger.transcript.challenge_index == 1


def test_out_of_range_update_time_not_recorded(challenger):
    challenger.update_key_query(2, [])
    for time in (7, -1):
        with pytest.raises(ParameterError):
            challenger.update_key_query(time, [1])
    assert len(challenger.transcript.queries) == 1
    assert challenger.transcript.rejected is None
    challenger.update_key_query(6, [1])
    assert [q.time for q in challenger.transcript.queries] == [2, 6]


def test_phase_two_key_condition(challenger):
    challenger.update_key_query(4, [])
    m0, m1 = messages(challenger)
    challenger.challenge(m0, m1, {"a"}, 2)
    challenger.private_key_query("b", 2)
    with pytest.raises(RestrictionViolated) as info:
        challenger.private_key_query("a", 1)
    assert info.value.rule == RestrictionViolated.PHASE2_KEY


def test_phase_two_update_condition(challenger):
    challenger.private_key_query("a", 1)
    m0, m1 = messages(challenger)
    challenger.challenge(m0, m1, {"a"}, 2)
    challenger.update_key_query(1, [])
    challenger.update_key_query(3, [1])
    with pytest.raises(RestrictionViolated) as info:
        challenger.update_key_query(5, [2])
    assert info.value.rule == RestrictionViolated.PHASE2_UPDATE
    assert check_transcript(challenger.transcript) == [(3, RestrictionViolated.PHASE2_UPDATE)]


def test_bit_hidden_without_backdoor(challenger):
    m0, m1 = messages(challenger)
    challenger.challenge(m0, m1, {"b"}, 0)
    with pytest.raises(ParameterError):
        challenger.reveal_bit()


def test_fuzzed_transcripts_revalidate(descriptor24):
    accepted = rejected = 0
    for seed in range(50):
        try:
            _, _, transcript = run_game(GameConfig(seed=seed), FuzzingAdversary(), rng=random.Random(seed),
                                        descriptor=descriptor24)
        except RestrictionViolated as e:
            rejected += 1
            assert check_transcript(e.transcript) == [(e.query_index, e.rule)]
            continue
        accepted += 1
        assert check_transcript(transcript) == []
    assert accepted and rejected


def test_transcript_dump(descriptor24):
    adversary = RevokedUserAdversary()
    b, guess, transcript = run_game(GameConfig(seed=1), adversary, rng=random.Random(1), descriptor=descriptor24)
    lines = transcript.lines()
    assert lines[0].startswith("0 phase1 key user=1")
    assert lines[4] == "challenge attributes=a,b time=2"
    assert lines[5] == "4 phase2 update time=5 revoked=1"
    assert lines[-1] == f"bit b={b} guess={guess}"
    assert transcript.dump().endswith("\n")


def test_revoked_user_never_decrypts(descriptor24):
    adversaries = []

    def factory():
        adversaries.append(RevokedUserAdversary())
        return adversaries[-1]

    estimate = estimate_advantage(GameConfig(trials=100, seed=3), factory, descriptor=descriptor24)
    assert within_three_sigma(estimate)
    for adversary in adversaries:
        assert {"Revoked", "NotAuthorized", "TimeTooEarly"} <= set(adversary.failures)


def test_backdoor_calibrates_harness(descriptor24):
    estimate = estimate_advantage(GameConfig(trials=100, seed=4), BackdoorAdversary, descriptor=descriptor24,
                                  backdoor=True)
    assert estimate.wins == 100
    assert estimate.advantage == 0.5


def test_too_few_trials_rejected():
    with pytest.raises(ParameterError):
        estimate_advantage(GameConfig(trials=50), CoinFlipAdversary)


def test_coin_flip_small_run(descriptor24):
    estimate = estimate_advantage(GameConfig(trials=100, seed=8), CoinFlipAdversary, descriptor=descriptor24)
    assert within_three_sigma(estimate)
    assert len(estimate.frame) == 100
    assert estimate.summary()["trials"] == 100


@pytest.mark.slow
def test_coin_flip_thousand_trials():
    estimate = estimate_advantage(GameConfig(trials=1000, seed=9), CoinFlipAdversary)
    assert within_three_sigma(estimate)


@pytest.mark.slow
def test_challenge_bit_is_fair(descriptor24):
    estimate = estimate_advantage(GameConfig(trials=2000, seed=10), CoinFlipAdversary, descriptor=descriptor24)
    # 99.9% quantile of chi-square with one degree of freedom
    assert estimate.bit_chi_square < 10.83


def test_assumption_one_shapes(descriptor24, rng):
    d, w1, w2 = assumption1_instance(descriptor24, rng)
    assert order_divides(d.g1, descriptor24.p1) and order_divides(d.g3, descriptor24.p3)
    assert order_divides(w1, descriptor24.p1)
    assert order_divides(w2, descriptor24.p1 * descriptor24.p2)
    assert not order_divides(w2, descriptor24.p1)


def test_assumption_two_shapes(descriptor24, rng):
    d, w1, w2 = assumption2_instance(descriptor24, rng)
    p1, p2, p3 = descriptor24.primes
    assert order_divides(d.x1y1, p1 * p2)
    assert order_divides(d.y2z1, p2 * p3)
    assert order_divides(w2, p1 * p3)
    assert not order_divides(w1, p1 * p3)


def test_assumption_three_shapes(descriptor24, rng):
    d, w1, w2 = assumption3_instance(descriptor24, rng)
    p1, p2, _ = descriptor24.primes
    assert order_divides(d.g1_alpha_y1, p1 * p2)
    assert order_divides(d.g1_s_y2, p1 * p2)
    assert order_divides(w2, p1)
    assert order_divides(w1, descriptor24.n)
