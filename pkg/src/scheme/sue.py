"""
Self-updatable encryption over a pre-order time tree

Times 0..T_max are the nodes of a perfect binary tree of depth d_max visited
root, left subtree, right subtree. A time is named by its label, the bit
string of left (0) and right (1) turns from the root. A header for time T
holds one sub-header for label(T) and one for each right sibling label
L[:i] + '1' where L[i] = '0'. Keys for T' decrypt exactly when some sub-header
label is a prefix of label(T').
"""

import logging
import random
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from crypto.codec import ByteReader, ByteWriter
from crypto.group import (CurveParams, GroupDescriptor, GroupElement, Subgroup, TargetElement,
                          identity, pair, sample_subgroup)
from scheme.errors import DecodeError, NoMatchingHeader, ParameterError
from utils.helpers import Rng

logger = logging.getLogger(__name__)


def sue_depth(t_max: int) -> int:
    """d_max = ceil(log2(T_max + 2)) - 1"""
    if t_max < 1:
        raise ParameterError(f"T_max must be at least 1, got {t_max}")
    return (t_max + 1).bit_length() - 1


def time_to_label(t: int, t_max: int) -> str:
    if not 0 <= t <= t_max:
        raise ParameterError(f"time {t} outside 0..{t_max}")
    d_max = sue_depth(t_max)
    label = ""
    remaining = t
    while remaining:
        remaining -= 1
        left_size = (1 << (d_max - len(label))) - 1
        if remaining < left_size:
            label += "0"
        else:
            remaining -= left_size
            label += "1"
    return label


def label_to_time(label: str, d_max: int) -> int:
    if len(label) > d_max or set(label) - {"0", "1"}:
        raise ParameterError(f"invalid label {label!r} for depth {d_max}")
    t = 0
    for depth, bit in enumerate(label):
        t += 1 if bit == "0" else 1 << (d_max - depth)
    return t


def cover_labels(label: str) -> List[str]:
    """label itself, then each right-sibling label from the shallowest level down"""
    return [label] + [label[:i] + "1" for i, bit in enumerate(label) if bit == "0"]


@dataclass(frozen=True)
class SueMasterKey:
    beta: int
    Z: GroupElement


@dataclass(frozen=True)
class SuePublicKey:
    g: GroupElement
    w: GroupElement
    u: Tuple[Tuple[GroupElement, GroupElement], ...]
    h: Tuple[Tuple[GroupElement, GroupElement], ...]
    t_max: int
    Lambda: Optional[TargetElement] = None

    @property
    def params(self) -> CurveParams:
        return self.g.params

    @property
    def d_max(self) -> int:
        return len(self.u)

    @cached_property
    def factors(self) -> Tuple[Tuple[GroupElement, GroupElement], ...]:
        return tuple((u0 * h0, u1 * h1) for (u0, u1), (h0, h1) in zip(self.u, self.h))

    def factor(self, level: int, bit) -> GroupElement:
        """F_{level,bit} = u_{level,bit} * h_{level,bit}, level counted from 1"""
        return self.factors[level - 1][int(bit)]


@dataclass(frozen=True)
class SueSecretKey:
    time: int
    label: str
    k0: GroupElement
    k1: GroupElement
    k2: Tuple[GroupElement, ...]


@dataclass(frozen=True)
class SubHeader:
    label: str
    c1: GroupElement
    c2: Tuple[GroupElement, ...]


@dataclass(frozen=True)
class SueHeader:
    """Main sub-header plus right-sibling sub-headers keyed by their level"""
    time: int
    c0: GroupElement
    main: SubHeader
    futures: Dict[int, Tuple[GroupElement, GroupElement]] = field(default_factory=dict)

    def future(self, level: int) -> SubHeader:
        c1, c2 = self.futures[level]
        return SubHeader(self.main.label[:level - 1] + "1", c1, self.main.c2[:level - 1] + (c2,))

    def subheaders(self) -> Iterator[SubHeader]:
        yield self.main
        for level in sorted(self.futures):
            yield self.future(level)


@dataclass(frozen=True)
class LevelExponents:
    """Per-level randomness: main levels 1..n and one exponent per future level"""
    main: Tuple[int, ...]
    future: Dict[int, int]

    @classmethod
    def sample(cls, label: str, future_levels, n: int, rng: Rng) -> "LevelExponents":
        return cls(main=tuple(rng.randrange(0, n) for _ in label),
                   future={level: rng.randrange(0, n) for level in sorted(future_levels)})


def _future_levels(label: str) -> List[int]:
    return [i + 1 for i, bit in enumerate(label) if bit == "0"]


def sue_public_params(descriptor: GroupDescriptor, t_max: int, rng: Rng,
                      g: Optional[GroupElement] = None) -> SuePublicKey:
    d_max = sue_depth(t_max)
    if g is None:
        g = sample_subgroup(descriptor, Subgroup.P1, rng)
    w = sample_subgroup(descriptor, Subgroup.P1, rng)
    u = tuple((sample_subgroup(descriptor, Subgroup.P1, rng), sample_subgroup(descriptor, Subgroup.P1, rng))
              for _ in range(d_max))
    h = tuple((sample_subgroup(descriptor, Subgroup.P1, rng), sample_subgroup(descriptor, Subgroup.P1, rng))
              for _ in range(d_max))
    return SuePublicKey(g=g, w=w, u=u, h=h, t_max=t_max)


def sue_setup(descriptor: GroupDescriptor, t_max: int, rng: Rng) -> Tuple[SueMasterKey, SuePublicKey]:
    pk = sue_public_params(descriptor, t_max, rng)
    beta = rng.randrange(0, descriptor.n)
    Z = sample_subgroup(descriptor, Subgroup.P3, rng)
    pk = replace(pk, Lambda=pair(pk.g, pk.g) ** beta)
    logger.info(f"[SETUP] SUE tree depth {pk.d_max} for T_max={t_max}")
    return SueMasterKey(beta=beta, Z=Z), pk


def sue_genkey(pk: SuePublicKey, mk: SueMasterKey, t_prime: int, rng: Rng,
               blind: bool = True) -> SueSecretKey:
    """K_0 = g^beta w^r Z_0, K_1 = g^r Z_1, K_2j = F_{j,L'[j]}^r Z_2j"""
    label = time_to_label(t_prime, pk.t_max)
    n = pk.params.n

    def blinder() -> GroupElement:
        return mk.Z ** rng.randrange(0, n) if blind else identity(pk.params)

    r = rng.randrange(0, n)
    k0 = (pk.g ** mk.beta) * (pk.w ** r) * blinder()
    k1 = (pk.g ** r) * blinder()
    k2 = tuple((pk.factor(j, bit) ** r) * blinder() for j, bit in enumerate(label, start=1))
    return SueSecretKey(time=t_prime, label=label, k0=k0, k1=k1, k2=k2)


def assemble_header(pk: SuePublicKey, t: int, s: int, exponents: LevelExponents) -> SueHeader:
    """Header for time t from the global exponent s and explicit per-level exponents"""
    label = time_to_label(t, pk.t_max)
    if len(exponents.main) != len(label) or set(exponents.future) != set(_future_levels(label)):
        raise ParameterError("level exponents do not match the label of the time")
    acc = [pk.w ** s]
    for level, (bit, s_i) in enumerate(zip(label, exponents.main), start=1):
        acc.append(acc[-1] * (pk.factor(level, bit) ** s_i))
    main = SubHeader(label, acc[-1], tuple(pk.g ** s_i for s_i in exponents.main))
    futures = {
        level: (acc[level - 1] * (pk.factor(level, 1) ** s_f), pk.g ** s_f)
        for level, s_f in exponents.future.items()
    }
    return SueHeader(time=t, c0=pk.g ** s, main=main, futures=futures)


def sue_encrypt(pk: SuePublicKey, t: int, s: int, rng: Rng) -> Tuple[SueHeader, Optional[TargetElement]]:
    label = time_to_label(t, pk.t_max)
    exponents = LevelExponents.sample(label, _future_levels(label), pk.params.n, rng)
    header = assemble_header(pk, t, s, exponents)
    ek = pk.Lambda ** s if pk.Lambda is not None else None
    return header, ek


def sue_encrypt_random(pk: SuePublicKey, t: int, rng: Rng) -> Tuple[SueHeader, Optional[TargetElement], int]:
    s = rng.randrange(0, pk.params.n)
    header, ek = sue_encrypt(pk, t, s, rng)
    return header, ek, s


def select_subheader(header: SueHeader, label: str) -> SubHeader:
    for sub in header.subheaders():
        if label.startswith(sub.label):
            return sub
    raise NoMatchingHeader(f"no sub-header of time {header.time} is an ancestor of label {label!r}")


def delegate(pk: SuePublicKey, sub: SubHeader, bits: str, rng: Rng) -> SubHeader:
    """Extend a sub-header downwards by the given bits with fresh level randomness"""
    c1, c2 = sub.c1, list(sub.c2)
    label = sub.label
    for bit in bits:
        level = len(label) + 1
        s_tilde = rng.randrange(0, pk.params.n)
        c1 = c1 * (pk.factor(level, bit) ** s_tilde)
        c2.append(pk.g ** s_tilde)
        label += bit
    return SubHeader(label, c1, tuple(c2))


def sue_decrypt(pk: SuePublicKey, sk: SueSecretKey, header: SueHeader,
                rng: Optional[Rng] = None) -> TargetElement:
    """e(C_0, K_0) * prod e(C_2j, K_2j) / e(C_1, K_1) after delegating to the key label"""
    sub = select_subheader(header, sk.label)
    if len(sub.label) < len(sk.label):
        sub = delegate(pk, sub, sk.label[len(sub.label):], rng or random.SystemRandom())
    return sue_session(sk, header.c0, sub)


def sue_session(sk: SueSecretKey, c0: GroupElement, sub: SubHeader) -> TargetElement:
    """Pairing product over the levels the sub-header carries

    zip pairs C_2j with K_2j only for the levels the sub-header has. Key levels
    below an ancestor sub-header are left unused, and the value matches the
    delegated form.
    """
    ek = pair(c0, sk.k0)
    for c2, k2 in zip(sub.c2, sk.k2):
        ek = ek * pair(c2, k2)
    return ek / pair(sub.c1, sk.k1)


def sue_randomize_ct(pk: SuePublicKey, header: SueHeader, s_bar: int, rng: Optional[Rng] = None,
                     offsets: Optional[LevelExponents] = None) -> SueHeader:
    """Move the header to global randomness s + s_bar and refresh every per-level exponent"""
    label = header.main.label
    if offsets is None:
        if rng is None:
            raise ParameterError("randomization needs an RNG or explicit offsets")
        offsets = LevelExponents.sample(label, header.futures, pk.params.n, rng)
    if len(offsets.main) != len(label) or set(offsets.future) != set(header.futures):
        raise ParameterError("offsets do not match the header shape")

    acc = [pk.w ** s_bar]
    for level, (bit, t_i) in enumerate(zip(label, offsets.main), start=1):
        acc.append(acc[-1] * (pk.factor(level, bit) ** t_i))
    main = SubHeader(
        label,
        header.main.c1 * acc[-1],
        tuple(c2 * (pk.g ** t_i) for c2, t_i in zip(header.main.c2, offsets.main)),
    )
    futures = {}
    for level, (c1, c2) in header.futures.items():
        t_f = offsets.future[level]
        futures[level] = (c1 * acc[level - 1] * (pk.factor(level, 1) ** t_f), c2 * (pk.g ** t_f))
    return SueHeader(time=header.time, c0=header.c0 * (pk.g ** s_bar), main=main, futures=futures)


def sue_update_ct(pk: SuePublicKey, header: SueHeader, rng: Rng, s_bar: int = 0) -> SueHeader:
    """Header for time T+1 decrypting to the same session element (times e(g,g)^(beta s_bar))"""
    if header.time >= pk.t_max:
        raise ParameterError(f"header time {header.time} is already T_max")
    label = header.main.label
    futures = dict(header.futures)
    if len(label) < pk.d_max:
        # internal node: step into the left child, remember the right child
        main = delegate(pk, header.main, "0", rng)
        right = delegate(pk, header.main, "1", rng)
        futures[len(label) + 1] = (right.c1, right.c2[-1])
    else:
        # leaf: the deepest right-sibling sub-header is the pre-order successor
        if not futures:
            raise ParameterError("leaf header without a successor")
        level = max(futures)
        c1, c2 = futures.pop(level)
        main = SubHeader(label[:level - 1] + "1", c1, header.main.c2[:level - 1] + (c2,))
    updated = SueHeader(time=header.time + 1, c0=header.c0, main=main, futures=futures)
    if updated.main.label != time_to_label(updated.time, pk.t_max):
        raise ParameterError("updated header label is not the successor time")
    return sue_randomize_ct(pk, updated, s_bar, rng)


def header_labels(header: SueHeader) -> List[str]:
    return [sub.label for sub in header.subheaders()]


def key_size(sk: SueSecretKey) -> int:
    return 2 + len(sk.k2)


def header_size(header: SueHeader) -> int:
    return 2 + len(header.main.c2) + 2 * len(header.futures)


def write_secret_key(w: ByteWriter, sk: SueSecretKey) -> None:
    w.u32(sk.time).element(sk.k0).element(sk.k1).u32(len(sk.k2))
    for k2 in sk.k2:
        w.element(k2)


def read_secret_key(r: ByteReader, params: CurveParams, t_max: int) -> SueSecretKey:
    t = r.u32()
    try:
        label = time_to_label(t, t_max)
    except ParameterError as e:
        raise DecodeError(str(e)) from e
    k0, k1 = r.element(params), r.element(params)
    if r.u32() != len(label):
        raise DecodeError("SUE key length does not match its time")
    k2 = tuple(r.element(params) for _ in label)
    return SueSecretKey(time=t, label=label, k0=k0, k1=k1, k2=k2)


def write_header(w: ByteWriter, header: SueHeader, include_c0: bool = True) -> None:
    w.u32(header.time)
    w.u16(len(header.main.label)).element(header.main.c1).u32(len(header.main.c2))
    for c2 in header.main.c2:
        w.element(c2)
    w.u32(len(header.futures))
    for level in sorted(header.futures):
        c1, c2 = header.futures[level]
        w.u32(level).element(c1).element(c2)
    if include_c0:
        w.element(header.c0)


def read_header(r: ByteReader, params: CurveParams, t_max: int,
                c0: Optional[GroupElement] = None) -> SueHeader:
    t = r.u32()
    try:
        label = time_to_label(t, t_max)
    except ParameterError as e:
        raise DecodeError(str(e)) from e
    if r.u16() != len(label):
        raise DecodeError("SUE header label length does not match its time")
    main_c1 = r.element(params)
    if r.u32() != len(label):
        raise DecodeError("SUE header level count mismatch")
    main_c2 = tuple(r.element(params) for _ in label)
    count = r.u32()
    futures = {}
    for _ in range(count):
        level = r.u32()
        futures[level] = (r.element(params), r.element(params))
    if sorted(futures) != _future_levels(label):
        raise DecodeError("SUE header future levels do not match its time")
    if c0 is None:
        c0 = r.element(params)
    return SueHeader(time=t, c0=c0, main=SubHeader(label, main_c1, main_c2), futures=futures)
