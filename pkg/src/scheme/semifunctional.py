"""
Semi-functional keys and ciphertexts (test oracle)
Needs the factorization of N to reach G_p2, so it is built from the master-key side only
"""

from dataclasses import dataclass, replace
from typing import Dict, Iterable, Optional, Tuple

from crypto.group import GroupElement, PublicInfo, TargetElement, pair
from policy.lsss import AccessStructure, ExpandedAttribute, make_shares
from scheme import kp_abe
from scheme.errors import ParameterError
from scheme.kp_abe import AbeHeader, AbePublicKey, AbeSecretKey
from scheme.rsabe import (RsabeCiphertext, RsabeMasterKey, RsabePrivateKey, RsabePublicKey,
                          TimeUpdateKey, rsabe_encrypt, rsabe_genkey, rsabe_updatekey)
from utils.helpers import Rng


@dataclass(frozen=True)
class SfContext:
    g2: GroupElement
    p2: int
    zeta: Tuple[int, ...]
    eta: Tuple[int, ...]
    z: Dict[ExpandedAttribute, int]

    @classmethod
    def create(cls, mk: RsabeMasterKey, pk: RsabePublicKey, rng: Rng) -> "SfContext":
        """Fix g2, per-node zeta/eta and per-attribute z once for a scheme instance"""
        descriptor = mk.descriptor
        n, p2 = descriptor.n, descriptor.p2

        def nonzero_mod_p2() -> int:
            while True:
                value = rng.randrange(1, n)
                if value % p2:
                    return value

        return cls(
            g2=descriptor.g_bar2,
            p2=p2,
            zeta=tuple(nonzero_mod_p2() for _ in range(mk.tree.node_count)),
            eta=tuple(nonzero_mod_p2() for _ in range(mk.tree.node_count)),
            z={attr: rng.randrange(0, n) for attr in pk.universe.expanded()},
        )

    def sample_c(self, rng: Rng) -> int:
        """Ciphertext exponent, nonzero mod p2"""
        while True:
            c = rng.randrange(1, self.g2.params.n)
            if c % self.p2:
                return c


def _require(ctx: Optional[SfContext]) -> SfContext:
    if ctx is None:
        raise ParameterError("semi-functional algorithms need an SfContext")
    return ctx


def sf_abe_key(ctx: SfContext, sk: AbeSecretKey, zeta: int, rng: Rng) -> AbeSecretKey:
    """K_1i * g2^(B_i . v_hat) with v_hat = (zeta, r'_2..r'_m); K_2i untouched"""
    shares = make_shares(sk.structure, zeta, rng).shares
    components = tuple((k1 * (ctx.g2 ** share), k2) for (k1, k2), share in zip(sk.components, shares))
    return replace(sk, components=components)


def sf_genkey(ctx: Optional[SfContext], pi: PublicInfo, pk: RsabePublicKey, mk: RsabeMasterKey,
              structure: AccessStructure, u: int, rng: Rng) -> RsabePrivateKey:
    ctx = _require(ctx)
    sk = rsabe_genkey(pi, pk, mk, structure, u, rng)
    sub_keys = {node: sf_abe_key(ctx, key, ctx.zeta[node], rng) for node, key in sk.sub_keys.items()}
    return replace(sk, sub_keys=sub_keys)


def sf_updatekey(ctx: Optional[SfContext], pi: PublicInfo, pk: RsabePublicKey, mk: RsabeMasterKey,
                 t: int, revoked: Iterable[int], rng: Rng) -> TimeUpdateKey:
    """Standard update key with K_0 * g2^eta_node on every sub-key"""
    ctx = _require(ctx)
    tk = rsabe_updatekey(pi, pk, mk, t, revoked, rng)
    sub_keys = {node: replace(key, k0=key.k0 * (ctx.g2 ** ctx.eta[node])) for node, key in tk.sub_keys.items()}
    return replace(tk, sub_keys=sub_keys)


def sf_transform_header(ctx: SfContext, header: AbeHeader, c: int) -> AbeHeader:
    """C_0 * g2^c and C_1a * g2^(c z_a)"""
    return AbeHeader(
        attributes=header.attributes,
        c0=header.c0 * (ctx.g2 ** c),
        c1={a: c1 * (ctx.g2 ** (c * ctx.z[a])) for a, c1 in header.c1.items()},
    )


def sf_abe_encrypt(ctx: Optional[SfContext], pi: PublicInfo, pk_abe: AbePublicKey, attributes: Iterable[str],
                   message: TargetElement, c: int, rng: Rng,
                   lam: Optional[TargetElement] = None) -> Tuple[TargetElement, AbeHeader, int]:
    """Standard ABE encryption followed by the G_p2 transform; returns (C, header, s)

    lam stands in for Lambda when the public key was generated without it.
    """
    ctx = _require(ctx)
    lam = lam if lam is not None else pk_abe.Lambda
    if lam is None:
        raise ParameterError("ABE public key carries no Lambda")
    s = rng.randrange(0, pi.n)
    header, _ = kp_abe.abe_encrypt(pk_abe, attributes, s)
    return message * (lam ** s), sf_transform_header(ctx, header, c), s


def sf_rsabe_encrypt(ctx: Optional[SfContext], pi: PublicInfo, pk: RsabePublicKey, message: TargetElement,
                     attributes: Iterable[str], t: int, rng: Rng, c: Optional[int] = None,
                     s: Optional[int] = None) -> RsabeCiphertext:
    """The ABE header goes semi-functional, the SUE header keeps its standard form

    The shared C_0 carries the g2^c factor in both headers; it pairs to 1
    against standard SUE keys.
    """
    ctx = _require(ctx)
    if c is None:
        c = ctx.sample_c(rng)
    ct = rsabe_encrypt(pi, pk, message, attributes, t, rng, s=s)
    abe_header = sf_transform_header(ctx, ct.abe_header, c)
    sue_header = replace(ct.sue_header, c0=abe_header.c0)
    return replace(ct, abe_header=abe_header, sue_header=sue_header)


def residual(ctx: SfContext, node: int, c: int, private_key: bool = True,
             update_key: bool = False) -> TargetElement:
    """G_T factor an SF ciphertext loses to semi-functional keys at node

    e(g2, g2)^(c zeta_node) from an SF private key, e(g2, g2)^(c eta_node)
    from an SF update key; decryption returns M / residual.
    """
    exponent = (ctx.zeta[node] if private_key else 0) + (ctx.eta[node] if update_key else 0)
    return pair(ctx.g2, ctx.g2) ** (c * exponent)
