"""
Key-policy ABE over the G_p1 subgroup with G_p3 key blinding
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from config import Config
from crypto.codec import ByteReader, ByteWriter
from crypto.group import (CurveParams, GroupDescriptor, GroupElement, Subgroup, TargetElement,
                          identity, pair, sample_subgroup)
from policy.lsss import (AccessStructure, AttributeUniverse, ExpandedAttribute, make_shares,
                         read_structure, recon_coeffs, write_structure)
from scheme.errors import DecodeError, ParameterError
from utils.helpers import Rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AbeMasterKey:
    gamma: int
    Z: GroupElement


@dataclass(frozen=True)
class AbePublicKey:
    g: GroupElement
    T: Dict[ExpandedAttribute, GroupElement]
    universe: AttributeUniverse
    Lambda: Optional[TargetElement] = None

    @property
    def params(self) -> CurveParams:
        return self.g.params


@dataclass(frozen=True)
class AbeSecretKey:
    structure: AccessStructure
    components: Tuple[Tuple[GroupElement, GroupElement], ...]


@dataclass(frozen=True)
class AbeHeader:
    attributes: FrozenSet[str]
    c0: GroupElement
    c1: Dict[ExpandedAttribute, GroupElement]


def abe_public_params(descriptor: GroupDescriptor, universe: AttributeUniverse, rng: Rng,
                      g: Optional[GroupElement] = None) -> AbePublicKey:
    """g and one T_a in G_p1 per expanded attribute, without Lambda"""
    if g is None:
        g = sample_subgroup(descriptor, Subgroup.P1, rng)
    T = {attr: sample_subgroup(descriptor, Subgroup.P1, rng) for attr in universe.expanded()}
    return AbePublicKey(g=g, T=T, universe=universe)


def abe_setup(descriptor: GroupDescriptor, attributes: Iterable[str], rng: Rng,
              max_duplication: int = Config.MAX_DUPLICATION) -> Tuple[AbeMasterKey, AbePublicKey]:
    universe = AttributeUniverse(tuple(attributes), max_duplication)
    pk = abe_public_params(descriptor, universe, rng)
    gamma = rng.randrange(0, descriptor.n)
    Z = sample_subgroup(descriptor, Subgroup.P3, rng)
    pk = replace(pk, Lambda=pair(pk.g, pk.g) ** gamma)
    logger.info(f"[SETUP] ABE universe of {len(universe.names)} attributes x {universe.k} copies")
    return AbeMasterKey(gamma=gamma, Z=Z), pk


def _blinder(mk_Z: GroupElement, rng: Rng, blind: bool) -> GroupElement:
    if not blind:
        return identity(mk_Z.params)
    return mk_Z ** rng.randrange(0, mk_Z.params.n)


def abe_genkey(pk: AbePublicKey, mk: AbeMasterKey, structure: AccessStructure, rng: Rng,
               blind: bool = True) -> AbeSecretKey:
    """K_1i = g^(B_i.v) T_rho(i)^s_i Z_1i, K_2i = g^s_i Z_2i with v = (gamma, r_2..r_m)"""
    if len(set(structure.rho)) != len(structure.rho):
        raise ParameterError("row labelling is not injective")
    missing = [attr for attr in structure.rho if attr not in pk.T]
    if missing:
        raise ParameterError(f"policy needs attribute copies outside the public key: {missing[:3]}")
    n = pk.params.n
    shares = make_shares(structure, mk.gamma, rng).shares
    components = []
    for share, attr in zip(shares, structure.rho):
        s_i = rng.randrange(0, n)
        k1 = (pk.g ** share) * (pk.T[attr] ** s_i) * _blinder(mk.Z, rng, blind)
        k2 = (pk.g ** s_i) * _blinder(mk.Z, rng, blind)
        components.append((k1, k2))
    return AbeSecretKey(structure=structure, components=tuple(components))


def abe_encrypt(pk: AbePublicKey, attributes: Iterable[str],
                s: int) -> Tuple[AbeHeader, Optional[TargetElement]]:
    """C_0 = g^s, C_1a = T_a^s for a in S'; session element Lambda^s when the key carries Lambda"""
    attributes = frozenset(attributes)
    expanded = pk.universe.expand(attributes)
    header = AbeHeader(attributes=attributes, c0=pk.g ** s, c1={a: pk.T[a] ** s for a in expanded})
    ek = pk.Lambda ** s if pk.Lambda is not None else None
    return header, ek


def abe_encrypt_random(pk: AbePublicKey, attributes: Iterable[str],
                       rng: Rng) -> Tuple[AbeHeader, Optional[TargetElement], int]:
    s = rng.randrange(0, pk.params.n)
    header, ek = abe_encrypt(pk, attributes, s)
    return header, ek, s


def abe_decrypt(pk: AbePublicKey, sk: AbeSecretKey, header: AbeHeader) -> TargetElement:
    return abe_session(sk, header, recon_coeffs(sk.structure, header.attributes))


def abe_session(sk: AbeSecretKey, header: AbeHeader, coefficients: Dict[int, int]) -> TargetElement:
    """prod (e(C_0, K_1i) / e(C_1rho(i), K_2i))^omega_i, with the C_0 pairings merged"""
    k1_combined = identity(header.c0.params)
    denominator = None
    for i, omega in coefficients.items():
        k1, k2 = sk.components[i]
        k1_combined = k1_combined * (k1 ** omega)
        term = pair(header.c1[sk.structure.rho[i]], k2 ** omega)
        denominator = term if denominator is None else denominator * term
    numerator = pair(header.c0, k1_combined)
    if denominator is None:
        return numerator
    return numerator / denominator


def abe_randomize(pk: AbePublicKey, ek: Optional[TargetElement], header: AbeHeader,
                  s_bar: int) -> Tuple[Optional[TargetElement], AbeHeader]:
    """Shift the encryption randomness from s to s + s_bar"""
    new_header = AbeHeader(
        attributes=header.attributes,
        c0=header.c0 * (pk.g ** s_bar),
        c1={a: c * (pk.T[a] ** s_bar) for a, c in header.c1.items()},
    )
    if ek is not None and pk.Lambda is not None:
        ek = ek * (pk.Lambda ** s_bar)
    return ek, new_header


def key_size(sk: AbeSecretKey) -> int:
    return 2 * len(sk.components)


def header_size(header: AbeHeader) -> int:
    return len(header.c1) + 1


def write_secret_key(w: ByteWriter, sk: AbeSecretKey, universe: AttributeUniverse) -> None:
    write_structure(w, sk.structure, universe)
    w.u32(len(sk.components))
    for k1, k2 in sk.components:
        w.element(k1).element(k2)


def read_secret_key(r: ByteReader, universe: AttributeUniverse, params: CurveParams) -> AbeSecretKey:
    structure = read_structure(r, universe, params.n)
    count = r.u32()
    if count != structure.rows:
        raise DecodeError("key component count does not match the access structure")
    components = tuple((r.element(params), r.element(params)) for _ in range(count))
    return AbeSecretKey(structure=structure, components=components)


def write_header(w: ByteWriter, header: AbeHeader, universe: AttributeUniverse,
                 include_c0: bool = True) -> None:
    names = [name for name in universe.names if name in header.attributes]
    w.u32(len(names))
    for name in names:
        w.u32(universe.names.index(name))
    expanded = universe.expand(header.attributes)
    w.u32(len(expanded) + (1 if include_c0 else 0))
    if include_c0:
        w.element(header.c0)
    for attr in expanded:
        w.element(header.c1[attr])


def read_header(r: ByteReader, universe: AttributeUniverse, params: CurveParams,
                c0: Optional[GroupElement] = None) -> AbeHeader:
    count = r.u32()
    if count > len(universe.names):
        raise DecodeError("attribute list longer than the universe")
    indices = [r.u32() for _ in range(count)]
    if indices != sorted(set(indices)) or any(i >= len(universe.names) for i in indices):
        raise DecodeError("attribute list is not a sorted set of universe indices")
    attributes = frozenset(universe.names[i] for i in indices)
    expanded = universe.expand(attributes)
    expected = len(expanded) + (1 if c0 is None else 0)
    if r.u32() != expected:
        raise DecodeError("header component count mismatch")
    if c0 is None:
        c0 = r.element(params)
    c1 = {attr: r.element(params) for attr in expanded}
    return AbeHeader(attributes=attributes, c0=c0, c1=c1)
