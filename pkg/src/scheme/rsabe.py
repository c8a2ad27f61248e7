"""
Revocable-storage KP-ABE composed from CS revocation, KP-ABE and SUE
The master secret alpha splits per tree node as gamma_i (ABE half) + (alpha - gamma_i) (SUE half)
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from config import Config
from crypto.group import (GroupDescriptor, GroupElement, PublicInfo, Subgroup, TargetElement,
                          gen_descriptor, pair, sample_subgroup)
from policy.lsss import AccessStructure, AttributeUniverse, recon_coeffs
from scheme import kp_abe, sue
from scheme.errors import NoMatchingHeader, NotAuthorized, Revoked, TimeTooEarly
from scheme.kp_abe import AbeHeader, AbeMasterKey, AbePublicKey, AbeSecretKey
from scheme.subset_cover import CoverSet, PrivateSet, UserTree, cs_assign, cs_cover, cs_match, cs_setup
from scheme.sue import SueHeader, SueMasterKey, SuePublicKey, SueSecretKey
from utils.helpers import Rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RsabeMasterKey:
    alpha: int
    tree: UserTree
    gammas: Tuple[int, ...]
    Z: GroupElement
    descriptor: GroupDescriptor

    def abe_master(self, node: int) -> AbeMasterKey:
        return AbeMasterKey(gamma=self.gammas[node], Z=self.Z)

    def sue_master(self, node: int) -> SueMasterKey:
        return SueMasterKey(beta=(self.alpha - self.gammas[node]) % self.descriptor.n, Z=self.Z)


@dataclass(frozen=True)
class RsabePublicKey:
    omega: TargetElement
    abe: AbePublicKey
    sue: SuePublicKey
    tree: UserTree

    @property
    def params(self):
        return self.abe.params

    @property
    def g(self) -> GroupElement:
        return self.abe.g

    @property
    def universe(self) -> AttributeUniverse:
        return self.abe.universe

    @property
    def t_max(self) -> int:
        return self.sue.t_max


@dataclass(frozen=True)
class RsabePrivateKey:
    user: int
    structure: AccessStructure
    private_set: PrivateSet
    sub_keys: Dict[int, AbeSecretKey]


@dataclass(frozen=True)
class TimeUpdateKey:
    time: int
    cover: CoverSet
    sub_keys: Dict[int, SueSecretKey]

    @property
    def revoked(self) -> FrozenSet[int]:
        return self.cover.revoked


@dataclass(frozen=True)
class RsabeCiphertext:
    attributes: FrozenSet[str]
    time: int
    abe_header: AbeHeader
    sue_header: SueHeader
    c: TargetElement


def rsabe_setup(lam: int, attributes: Iterable[str], t_max: int, n_max: int, rng: Rng,
                max_duplication: int = Config.MAX_DUPLICATION,
                descriptor: Optional[GroupDescriptor] = None
                ) -> Tuple[RsabeMasterKey, PublicInfo, RsabePublicKey]:
    tree = cs_setup(n_max)
    universe = AttributeUniverse(tuple(attributes), max_duplication)
    sue.sue_depth(t_max)
    if descriptor is None:
        descriptor = gen_descriptor(lam, rng)
    n = descriptor.n

    g = sample_subgroup(descriptor, Subgroup.P1, rng)
    pk_abe = kp_abe.abe_public_params(descriptor, universe, rng, g=g)
    pk_sue = sue.sue_public_params(descriptor, t_max, rng, g=g)
    alpha = rng.randrange(0, n)
    gammas = tuple(rng.randrange(0, n) for _ in range(tree.node_count))
    Z = sample_subgroup(descriptor, Subgroup.P3, rng)

    mk = RsabeMasterKey(alpha=alpha, tree=tree, gammas=gammas, Z=Z, descriptor=descriptor)
    pk = RsabePublicKey(omega=pair(g, g) ** alpha, abe=pk_abe, sue=pk_sue, tree=tree)
    logger.info(f"[SETUP] ✅ RS-ABE ready: {len(universe.names)} attributes, "
                f"T_max={t_max}, N_max={tree.n_max}")
    return mk, descriptor.public_info(), pk


def rsabe_genkey(pi: PublicInfo, pk: RsabePublicKey, mk: RsabeMasterKey, structure: AccessStructure,
                 u: int, rng: Rng, blind: bool = True) -> RsabePrivateKey:
    pv = cs_assign(mk.tree, u)
    sub_keys = {node: kp_abe.abe_genkey(pk.abe, mk.abe_master(node), structure, rng, blind=blind)
                for node in pv.nodes}
    logger.info(f"[GENKEY] private key for user {u} over {len(sub_keys)} tree nodes")
    return RsabePrivateKey(user=u, structure=structure, private_set=pv, sub_keys=sub_keys)


def rsabe_updatekey(pi: PublicInfo, pk: RsabePublicKey, mk: RsabeMasterKey, t: int,
                    revoked: Iterable[int], rng: Rng, blind: bool = True) -> TimeUpdateKey:
    sue.time_to_label(t, pk.t_max)
    cover = cs_cover(mk.tree, revoked)
    sub_keys = {node: sue.sue_genkey(pk.sue, mk.sue_master(node), t, rng, blind=blind)
                for node in cover.nodes}
    logger.info(f"[GENKEY] update key for time {t}, {len(cover.revoked)} revoked, "
                f"{len(sub_keys)} cover nodes")
    return TimeUpdateKey(time=t, cover=cover, sub_keys=sub_keys)


def rsabe_encrypt(pi: PublicInfo, pk: RsabePublicKey, message: TargetElement, attributes: Iterable[str],
                  t: int, rng: Rng, s: Optional[int] = None) -> RsabeCiphertext:
    """One s shared by the ABE header, the SUE header and C = Omega^s * M"""
    attributes = frozenset(attributes)
    if s is None:
        s = rng.randrange(0, pi.n)
    abe_header, _ = kp_abe.abe_encrypt(pk.abe, attributes, s)
    sue_header, _ = sue.sue_encrypt(pk.sue, t, s, rng)
    return RsabeCiphertext(attributes=attributes, time=t, abe_header=abe_header,
                           sue_header=sue_header, c=(pk.omega ** s) * message)


def rsabe_decrypt(pi: PublicInfo, ct: RsabeCiphertext, sk: RsabePrivateKey, tk: TimeUpdateKey) -> TargetElement:
    """M = C / (EK_ABE * EK_SUE); every condition is checked before the first pairing"""
    node = cs_match(tk.cover, sk.private_set)
    if node is None:
        raise Revoked(f"user {sk.user} is revoked by the update key for time {tk.time}")
    try:
        coefficients = recon_coeffs(sk.structure, ct.attributes)
    except NotAuthorized as e:
        raise NotAuthorized(f"attributes {sorted(ct.attributes)} do not satisfy the key policy") from e
    sue_key = tk.sub_keys[node]
    try:
        sub = sue.select_subheader(ct.sue_header, sue_key.label)
    except NoMatchingHeader as e:
        raise TimeTooEarly(f"ciphertext time {ct.time} is later than update key time {tk.time}") from e

    ek_abe = kp_abe.abe_session(sk.sub_keys[node], ct.abe_header, coefficients)
    ek_sue = sue.sue_session(sue_key, ct.sue_header.c0, sub)
    logger.debug(f"[DECRYPT] user {sk.user} matched node {node}")
    return ct.c / (ek_abe * ek_sue)


def rsabe_update_ct(pi: PublicInfo, pk: RsabePublicKey, ct: RsabeCiphertext, rng: Rng) -> RsabeCiphertext:
    """Advance the SUE header one step; the ABE header, C and the shared C_0 stay as they are"""
    sue_header = sue.sue_update_ct(pk.sue, ct.sue_header, rng, s_bar=0)
    return RsabeCiphertext(attributes=ct.attributes, time=sue_header.time, abe_header=ct.abe_header,
                           sue_header=sue_header, c=ct.c)


def private_key_size(sk: RsabePrivateKey) -> int:
    return sum(kp_abe.key_size(k) for k in sk.sub_keys.values())


def update_key_size(tk: TimeUpdateKey) -> int:
    return sum(sue.key_size(k) for k in tk.sub_keys.values())


def ciphertext_size(ct: RsabeCiphertext) -> int:
    """|S'| C_1 elements, the SUE header (shared C_0 included) and C"""
    return len(ct.abe_header.c1) + sue.header_size(ct.sue_header) + 1


def update_key_bound(t_max: int, n_max: int, revoked: int) -> float:
    """(ceil(log2(T_max+2)) + 1) * r * log2(N_max / r)"""
    return (sue.sue_depth(t_max) + 2) * revoked * math.log2(n_max / revoked)
