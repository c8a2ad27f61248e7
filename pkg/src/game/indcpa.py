"""
IND-CPA game for the RS-ABE scheme: challenger, restriction checker and advantage estimation

This harness checks that the challenger enforces the query restrictions and that
decryption behaves; at toy parameter sizes it says nothing about security.
"""

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Callable, FrozenSet, Iterable, List, Optional, Tuple, Union

import pandas as pd

from config import Config
from crypto.group import GroupDescriptor, TargetElement, gen_descriptor, random_target
from policy.lsss import AccessStructure, compile_policy
from policy.parser import PolicyExpr, evaluate, policy_to_text
from scheme.errors import ParameterError, RestrictionViolated
from scheme.rsabe import RsabeCiphertext, RsabePrivateKey, TimeUpdateKey, rsabe_encrypt, rsabe_genkey, \
    rsabe_setup, rsabe_updatekey
from scheme.sue import time_to_label
from utils.helpers import Rng, make_rng

logger = logging.getLogger(__name__)

PHASE_ONE = 1
PHASE_TWO = 2


@dataclass(frozen=True)
class GameConfig:
    lam: int = Config.GAME_DEFAULT_LAMBDA
    attributes: Tuple[str, ...] = ("a", "b", "c")
    t_max: int = 6
    n_max: int = 4
    trials: int = 1000
    seed: Optional[int] = None
    max_duplication: int = 2
    share_descriptor: bool = True


@dataclass(frozen=True)
class KeyQuery:
    phase: int
    user: int
    structure: AccessStructure

    @property
    def policy(self) -> PolicyExpr:
        return self.structure.policy

    def line(self) -> str:
        return f"phase{self.phase} key user={self.user} policy={policy_to_text(self.policy)}"


@dataclass(frozen=True)
class UpdateQuery:
    phase: int
    time: int
    revoked: FrozenSet[int]

    def line(self) -> str:
        revoked = ",".join(str(u) for u in sorted(self.revoked)) or "-"
        return f"phase{self.phase} update time={self.time} revoked={revoked}"


@dataclass(frozen=True)
class Challenge:
    m0: TargetElement
    m1: TargetElement
    attributes: FrozenSet[str]
    time: int

    def line(self) -> str:
        return f"challenge attributes={','.join(sorted(self.attributes)) or '-'} time={self.time}"


Query = Union[KeyQuery, UpdateQuery]


@dataclass
class Transcript:
    """Ordered query log; the challenge sits between the phase-I and phase-II queries"""
    queries: List[Query] = field(default_factory=list)
    challenge: Optional[Challenge] = None
    challenge_index: Optional[int] = None
    b: Optional[int] = None
    guess: Optional[int] = None
    rejected: Optional[Tuple[int, str]] = None

    @property
    def won(self) -> bool:
        return self.b is not None and self.b == self.guess

    def keys(self, before: Optional[int] = None) -> List[Tuple[int, KeyQuery]]:
        stop = len(self.queries) if before is None else before
        return [(i, q) for i, q in enumerate(self.queries[:stop]) if isinstance(q, KeyQuery)]

    def updates(self, before: Optional[int] = None) -> List[Tuple[int, UpdateQuery]]:
        stop = len(self.queries) if before is None else before
        return [(i, q) for i, q in enumerate(self.queries[:stop]) if isinstance(q, UpdateQuery)]

    def lines(self) -> List[str]:
        """One line per query, for debugging dumps"""
        out = []
        for i, query in enumerate(self.queries):
            if self.challenge is not None and i == self.challenge_index:
                out.append(self.challenge.line())
            out.append(f"{i} {query.line()}")
        if self.challenge is not None and self.challenge_index == len(self.queries):
            out.append(self.challenge.line())
        if self.b is not None:
            out.append(f"bit b={self.b} guess={self.guess}")
        if self.rejected is not None:
            out.append(f"rejected query={self.rejected[0]} rule={self.rejected[1]}")
        return out

    def dump(self) -> str:
        return "\n".join(self.lines()) + "\n"


def _challenge_ok(key: KeyQuery, update: UpdateQuery, challenge: Challenge) -> bool:
    return (not evaluate(key.policy, challenge.attributes)
            or key.user in update.revoked
            or challenge.time > update.time)


def query_violation(transcript: Transcript, index: int) -> Optional[str]:
    """Rule broken by query index against everything before it, or None"""
    query = transcript.queries[index]
    challenge = transcript.challenge
    if isinstance(query, KeyQuery):
        if any(prior.user == query.user for _, prior in transcript.keys(index)):
            return RestrictionViolated.DUPLICATE_USER
        if query.phase == PHASE_TWO and evaluate(query.policy, challenge.attributes):
            if any(challenge.time <= update.time and query.user not in update.revoked
                   for _, update in transcript.updates(index)):
                return RestrictionViolated.PHASE2_KEY
        return None

    if any(prior.time == query.time for _, prior in transcript.updates(index)):
        return RestrictionViolated.DUPLICATE_TIME
    if query.phase == PHASE_TWO and challenge.time <= query.time:
        if any(evaluate(key.policy, challenge.attributes) and key.user not in query.revoked
               for _, key in transcript.keys(index)):
            return RestrictionViolated.PHASE2_UPDATE
    return None


def challenge_violation(transcript: Transcript) -> bool:
    """Whether some phase-I key/update pair already decrypts the challenge"""
    challenge = transcript.challenge
    stop = transcript.challenge_index
    return any(not _challenge_ok(key, update, challenge)
               for _, key in transcript.keys(stop) for _, update in transcript.updates(stop))


def check_transcript(transcript: Transcript) -> List[Tuple[int, str]]:
    """Re-check every restriction over a finished transcript; returns (index, rule) violations"""
    violations = []
    for i in range(len(transcript.queries)):
        if transcript.challenge is None and transcript.queries[i].phase == PHASE_TWO:
            violations.append((i, RestrictionViolated.CHALLENGE))
            continue
        rule = query_violation(transcript, i)
        if rule is not None:
            violations.append((i, rule))
    if transcript.challenge is not None and challenge_violation(transcript):
        violations.append((transcript.challenge_index, RestrictionViolated.CHALLENGE))
    return sorted(violations)


class Challenger:
    """Oracle handed to the adversary; refuses any query the game forbids"""

    def __init__(self, config: GameConfig, rng: Rng, descriptor: Optional[GroupDescriptor] = None,
                 backdoor: bool = False):
        self.config = config
        self._rng = rng
        self._mk, self.pi, self.pk = rsabe_setup(config.lam, config.attributes, config.t_max, config.n_max,
                                                 rng, max_duplication=config.max_duplication,
                                                 descriptor=descriptor)
        self._backdoor = backdoor
        self.transcript = Transcript()

    @property
    def phase(self) -> int:
        return PHASE_ONE if self.transcript.challenge is None else PHASE_TWO

    def random_message(self, rng: Rng) -> TargetElement:
        return random_target(self.pk.omega, rng)

    def _ensure_open(self) -> None:
        if self.transcript.rejected is not None:
            index, rule = self.transcript.rejected
            raise RestrictionViolated(index, rule, transcript=self.transcript)

    def _admit(self, query: Query) -> None:
        self._ensure_open()
        self.transcript.queries.append(query)
        index = len(self.transcript.queries) - 1
        rule = query_violation(self.transcript, index)
        if rule is not None:
            self._reject(index, rule)

    def _reject(self, index: int, rule: str) -> None:
        self.transcript.rejected = (index, rule)
        logger.info(f"[GAME] ❌ rejected query {index}: {rule}")
        raise RestrictionViolated(index, rule, transcript=self.transcript)

    def private_key_query(self, policy: Union[str, PolicyExpr], user: int) -> RsabePrivateKey:
        structure = compile_policy(policy, self.pi.n, universe=self.pk.universe)
        self.pk.tree.check_user(user)
        self._admit(KeyQuery(phase=self.phase, user=user, structure=structure))
        return rsabe_genkey(self.pi, self.pk, self._mk, structure, user, self._rng)

    def update_key_query(self, time: int, revoked: Iterable[int]) -> TimeUpdateKey:
        revoked = frozenset(revoked)
        for u in revoked:
            self.pk.tree.check_user(u)
        time_to_label(time, self.pk.t_max)
        # The phase-I "no previous private-key request" sentence is read as distinct update times only
        self._admit(UpdateQuery(phase=self.phase, time=time, revoked=revoked))
        return rsabe_updatekey(self.pi, self.pk, self._mk, time, revoked, self._rng)

    def challenge(self, m0: TargetElement, m1: TargetElement, attributes: Iterable[str],
                  time: int) -> RsabeCiphertext:
        self._ensure_open()
        if self.transcript.challenge is not None:
            raise ParameterError("the challenge is issued only once")
        attributes = frozenset(attributes)
        self.pk.universe.expand(attributes)
        time_to_label(time, self.pk.t_max)
        self.transcript.challenge = Challenge(m0=m0, m1=m1, attributes=attributes, time=time)
        self.transcript.challenge_index = len(self.transcript.queries)
        if challenge_violation(self.transcript):
            self._reject(self.transcript.challenge_index, RestrictionViolated.CHALLENGE)
        b = self._rng.randrange(2)
        self.transcript.b = b
        return rsabe_encrypt(self.pi, self.pk, m1 if b else m0, attributes, time, self._rng)

    def reveal_bit(self) -> int:
        """Test-rig backdoor for harness calibration"""
        if not self._backdoor:
            raise ParameterError("the challenge bit is only revealed to a backdoored adversary")
        if self.transcript.b is None:
            raise ParameterError("no challenge issued yet")
        return self.transcript.b


def run_game(config: GameConfig, adversary, rng: Optional[Rng] = None,
             descriptor: Optional[GroupDescriptor] = None, backdoor: bool = False) -> Tuple[int, int, Transcript]:
    """Play Setup, Query I, Challenge, Query II and Guess once; returns (b, b*, transcript)"""
    rng = rng or make_rng(config.seed)
    adversary_rng = random.Random(rng.getrandbits(64))
    challenger = Challenger(config, rng, descriptor=descriptor, backdoor=backdoor)

    adversary.setup(challenger, adversary_rng)
    adversary.query_phase1(challenger)
    m0, m1, attributes, time = adversary.challenge(challenger)
    ct = challenger.challenge(m0, m1, attributes, time)
    adversary.query_phase2(challenger, ct)
    guess = int(adversary.guess(challenger, ct)) & 1

    transcript = challenger.transcript
    transcript.guess = guess
    violations = check_transcript(transcript)
    if violations:
        index, rule = violations[0]
        raise RestrictionViolated(index, rule, transcript=transcript)
    return transcript.b, guess, transcript


@dataclass(frozen=True)
class AdvantageEstimate:
    advantage: float
    stderr: float
    trials: int
    wins: int
    frame: pd.DataFrame = field(repr=False, compare=False)

    @property
    def bit_chi_square(self) -> float:
        """Chi-square statistic of the challenge bits against a fair coin"""
        ones = int(self.frame["b"].sum())
        expected = self.trials / 2
        return ((ones - expected) ** 2 + (self.trials - ones - expected) ** 2) / expected

    def summary(self) -> dict:
        return {
            "trials": self.trials,
            "wins": self.wins,
            "advantage": round(self.advantage, 6),
            "stderr": round(self.stderr, 6),
        }


def _trial_rng(seed: Optional[int], trial: int) -> Rng:
    if seed is None:
        return random.SystemRandom()
    return random.Random(f"{seed}:{trial}")


def estimate_advantage(config: GameConfig, adversary_factory: Callable[[], object],
                       descriptor: Optional[GroupDescriptor] = None,
                       backdoor: bool = False) -> AdvantageEstimate:
    """|wins/trials - 1/2| over independent games, with its binomial standard error"""
    if config.trials < Config.GAME_MIN_TRIALS:
        raise ParameterError(f"at least {Config.GAME_MIN_TRIALS} trials are needed, got {config.trials}")
    if descriptor is None and config.share_descriptor:
        descriptor = gen_descriptor(config.lam, make_rng(config.seed))

    records = []
    for trial in range(config.trials):
        b, guess, transcript = run_game(config, adversary_factory(), rng=_trial_rng(config.seed, trial),
                                        descriptor=descriptor, backdoor=backdoor)
        records.append({"trial": trial, "b": b, "guess": guess, "win": int(b == guess),
                        "queries": len(transcript.queries)})

    frame = pd.DataFrame.from_records(records)
    wins = int(frame["win"].sum())
    p = wins / config.trials
    estimate = AdvantageEstimate(advantage=abs(p - 0.5), stderr=math.sqrt(p * (1 - p) / config.trials),
                                 trials=config.trials, wins=wins, frame=frame)
    logger.info(f"[GAME] {config.trials} trials, {wins} wins, advantage {estimate.advantage:.4f} "
                f"+/- {estimate.stderr:.4f}")
    return estimate
