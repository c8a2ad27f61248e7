"""
Built-in IND-CPA adversaries used to calibrate and exercise the game harness
"""

from abc import ABC, abstractmethod
from typing import Dict, FrozenSet, List, Tuple, Type

from crypto.group import TargetElement
from scheme.errors import NotAuthorized, Revoked, TimeTooEarly
from scheme.rsabe import RsabeCiphertext, rsabe_decrypt, rsabe_update_ct
from utils.helpers import Rng

ChallengeRequest = Tuple[TargetElement, TargetElement, FrozenSet[str], int]


class Adversary(ABC):
    """One callback per game phase; all randomness comes from the rng given at setup"""

    def setup(self, oracle, rng: Rng) -> None:
        self.oracle = oracle
        self.rng = rng

    def query_phase1(self, oracle) -> None:
        pass

    @abstractmethod
    def challenge(self, oracle) -> ChallengeRequest:
        ...

    def query_phase2(self, oracle, ct: RsabeCiphertext) -> None:
        pass

    @abstractmethod
    def guess(self, oracle, ct: RsabeCiphertext) -> int:
        ...

    def _messages(self, oracle) -> Tuple[TargetElement, TargetElement]:
        m0 = oracle.random_message(self.rng)
        m1 = oracle.random_message(self.rng)
        while m1 == m0:
            m1 = oracle.random_message(self.rng)
        return m0, m1


class CoinFlipAdversary(Adversary):
    """Asks nothing and guesses at random"""

    def challenge(self, oracle) -> ChallengeRequest:
        m0, m1 = self._messages(oracle)
        return m0, m1, frozenset(oracle.config.attributes[:1]), 0

    def guess(self, oracle, ct: RsabeCiphertext) -> int:
        return self.rng.randrange(2)


class BackdoorAdversary(CoinFlipAdversary):
    """Reads the challenge bit through the test-rig backdoor"""

    def guess(self, oracle, ct: RsabeCiphertext) -> int:
        return oracle.reveal_bit()


class RevokedUserAdversary(Adversary):
    """Issues every query type the game allows, then tries all its keys on the challenge

    User 1 holds a policy the challenge satisfies but is revoked from the
    challenge time on; users 2 and 3 hold policies it does not satisfy.
    Every decryption attempt must fail with one of the three typed conditions.
    """

    challenge_attributes = frozenset({"a", "b"})
    challenge_time = 2

    def setup(self, oracle, rng: Rng) -> None:
        super().setup(oracle, rng)
        self.private_keys = []
        self.update_keys = []
        self.failures: List[str] = []
        self.m0 = self.m1 = None

    def query_phase1(self, oracle) -> None:
        self.private_keys.append(oracle.private_key_query("a AND b", 1))
        self.private_keys.append(oracle.private_key_query("c", 2))
        self.update_keys.append(oracle.update_key_query(1, []))
        self.update_keys.append(oracle.update_key_query(3, [1]))

    def challenge(self, oracle) -> ChallengeRequest:
        self.m0, self.m1 = self._messages(oracle)
        return self.m0, self.m1, self.challenge_attributes, self.challenge_time

    def query_phase2(self, oracle, ct: RsabeCiphertext) -> None:
        self.update_keys.append(oracle.update_key_query(5, [1]))
        self.private_keys.append(oracle.private_key_query("c OR (a AND c)", 3))

    def guess(self, oracle, ct: RsabeCiphertext) -> int:
        ciphertexts = [ct, rsabe_update_ct(oracle.pi, oracle.pk, ct, self.rng)]
        for candidate in ciphertexts:
            for sk in self.private_keys:
                for tk in self.update_keys:
                    try:
                        m = rsabe_decrypt(oracle.pi, candidate, sk, tk)
                    except (Revoked, NotAuthorized, TimeTooEarly) as e:
                        self.failures.append(type(e).__name__)
                        continue
                    if m == self.m0:
                        return 0
                    if m == self.m1:
                        return 1
        return self.rng.randrange(2)


class FuzzingAdversary(Adversary):
    """Random query streams; many of them break a restriction and are rejected"""

    policies = ("a", "a AND b", "a OR c", "b AND c", "2 of (a, b, c)", "c")

    def setup(self, oracle, rng: Rng) -> None:
        super().setup(oracle, rng)
        self.users = list(range(1, oracle.config.n_max + 1))
        self.times = list(range(oracle.config.t_max + 1))

    def _random_queries(self, oracle) -> None:
        for _ in range(self.rng.randrange(0, 4)):
            if self.rng.random() < 0.5:
                oracle.private_key_query(self.rng.choice(self.policies), self.rng.choice(self.users))
            else:
                revoked = [u for u in self.users if self.rng.random() < 0.4]
                oracle.update_key_query(self.rng.choice(self.times), revoked)

    def query_phase1(self, oracle) -> None:
        self._random_queries(oracle)

    def challenge(self, oracle) -> ChallengeRequest:
        m0, m1 = self._messages(oracle)
        names = list(oracle.config.attributes)
        attributes = frozenset(a for a in names if self.rng.random() < 0.5) or frozenset(names[:1])
        return m0, m1, attributes, self.rng.choice(self.times)

    def query_phase2(self, oracle, ct: RsabeCiphertext) -> None:
        self._random_queries(oracle)

    def guess(self, oracle, ct: RsabeCiphertext) -> int:
        return self.rng.randrange(2)


ADVERSARIES: Dict[str, Type[Adversary]] = {
    "coin": CoinFlipAdversary,
    "backdoor": BackdoorAdversary,
    "revoked": RevokedUserAdversary,
}
