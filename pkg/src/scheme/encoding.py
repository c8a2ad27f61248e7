"""
Binary artifacts of the RS-ABE scheme
Each file is "RSABE001" || kind || nested module encodings
"""

from crypto.codec import ByteReader, ByteWriter
from crypto.group import GroupDescriptor, PublicInfo
from policy.lsss import AttributeUniverse
from scheme import kp_abe, sue
from scheme.errors import DecodeError, ParameterError
from scheme.kp_abe import AbePublicKey
from scheme.rsabe import RsabeCiphertext, RsabeMasterKey, RsabePrivateKey, RsabePublicKey, TimeUpdateKey
from scheme.subset_cover import UserTree, read_cover, read_private_set, write_cover, write_private_set
from scheme.sue import SuePublicKey

MAGIC = b"RSABE001"

KIND_MASTER = b"MK"
KIND_PUBLIC = b"PK"
KIND_PRIVATE = b"SK"
KIND_UPDATE = b"TK"
KIND_CIPHERTEXT = b"CT"
KIND_PUBLIC_INFO = b"PI"


def _writer(kind: bytes) -> ByteWriter:
    return ByteWriter().raw(MAGIC).raw(kind)


def _reader(data: bytes, kind: bytes) -> ByteReader:
    r = ByteReader(data)
    r.expect(MAGIC)
    found = r.take(2)
    if found != kind:
        raise DecodeError(f"expected a {kind.decode()} artifact, found {found!r}")
    return r


def artifact_kind(data: bytes) -> str:
    """Two-letter kind of an RS-ABE artifact"""
    if len(data) < len(MAGIC) + 2 or not data.startswith(MAGIC):
        raise DecodeError("not an RS-ABE artifact")
    return data[len(MAGIC):len(MAGIC) + 2].decode("ascii", errors="replace")


def encode_public_info(pi: PublicInfo) -> bytes:
    return _writer(KIND_PUBLIC_INFO).scalar(pi.q).scalar(pi.n).getvalue()


def decode_public_info(data: bytes) -> PublicInfo:
    r = _reader(data, KIND_PUBLIC_INFO)
    q, n = r.scalar(), r.scalar()
    r.finish()
    if n < 2 or (q + 1) % n:
        raise DecodeError("public info: N does not divide q+1")
    return PublicInfo(q=q, n=n)


def encode_master_key(mk: RsabeMasterKey) -> bytes:
    w = _writer(KIND_MASTER)
    w.scalar(mk.alpha).u32(mk.tree.depth).u32(len(mk.gammas))
    for gamma in mk.gammas:
        w.scalar(gamma)
    w.element(mk.Z)
    return w.getvalue()


def decode_master_key(data: bytes, descriptor: GroupDescriptor) -> RsabeMasterKey:
    r = _reader(data, KIND_MASTER)
    n, params = descriptor.n, descriptor.params
    alpha = r.scalar(n)
    tree = UserTree(depth=r.u32())
    if not 1 <= tree.depth <= 24 or r.u32() != tree.node_count:
        raise DecodeError("master key tree shape is inconsistent")
    gammas = tuple(r.scalar(n) for _ in range(tree.node_count))
    Z = r.element(params)
    r.finish()
    return RsabeMasterKey(alpha=alpha, tree=tree, gammas=gammas, Z=Z, descriptor=descriptor)


def encode_public_key(pk: RsabePublicKey) -> bytes:
    w = _writer(KIND_PUBLIC)
    universe = pk.universe
    w.u32(len(universe.names))
    for name in universe.names:
        w.text(name)
    w.u32(universe.k).u32(pk.t_max).u32(pk.tree.depth)
    w.element(pk.g)
    for attr in universe.expanded():
        w.element(pk.abe.T[attr])
    w.element(pk.sue.w)
    for (u0, u1), (h0, h1) in zip(pk.sue.u, pk.sue.h):
        w.element(u0).element(u1).element(h0).element(h1)
    w.target(pk.omega)
    return w.getvalue()


def decode_public_key(data: bytes, pi: PublicInfo) -> RsabePublicKey:
    r = _reader(data, KIND_PUBLIC)
    params = pi.params
    names = tuple(r.text() for _ in range(r.u32()))
    k, t_max, depth = r.u32(), r.u32(), r.u32()
    try:
        universe = AttributeUniverse(names, k)
        d_max = sue.sue_depth(t_max)
    except Exception as e:
        raise DecodeError(f"public key parameters are invalid: {e}") from e
    if not 1 <= depth <= 24:
        raise DecodeError("public key tree depth out of range")
    g = r.element(params)
    T = {attr: r.element(params) for attr in universe.expanded()}
    w = r.element(params)
    u, h = [], []
    for _ in range(d_max):
        u0, u1, h0, h1 = (r.element(params) for _ in range(4))
        u.append((u0, u1))
        h.append((h0, h1))
    omega = r.target(params)
    r.finish()
    return RsabePublicKey(
        omega=omega,
        abe=AbePublicKey(g=g, T=T, universe=universe),
        sue=SuePublicKey(g=g, w=w, u=tuple(u), h=tuple(h), t_max=t_max),
        tree=UserTree(depth=depth),
    )


def encode_private_key(sk: RsabePrivateKey, pk: RsabePublicKey) -> bytes:
    w = _writer(KIND_PRIVATE)
    write_private_set(w, sk.private_set)
    for node in sk.private_set.nodes:
        kp_abe.write_secret_key(w, sk.sub_keys[node], pk.universe)
    return w.getvalue()


def decode_private_key(data: bytes, pi: PublicInfo, pk: RsabePublicKey) -> RsabePrivateKey:
    r = _reader(data, KIND_PRIVATE)
    pv = read_private_set(r, pk.tree)
    sub_keys = {node: kp_abe.read_secret_key(r, pk.universe, pi.params) for node in pv.nodes}
    r.finish()
    structures = {key.structure for key in sub_keys.values()}
    if len(structures) != 1:
        raise DecodeError("private key sub-keys disagree on the access structure")
    return RsabePrivateKey(user=pv.user, structure=structures.pop(), private_set=pv, sub_keys=sub_keys)


def encode_update_key(tk: TimeUpdateKey) -> bytes:
    w = _writer(KIND_UPDATE)
    w.u32(tk.time)
    write_cover(w, tk.cover)
    for node in tk.cover.nodes:
        sue.write_secret_key(w, tk.sub_keys[node])
    return w.getvalue()


def decode_update_key(data: bytes, pi: PublicInfo, pk: RsabePublicKey) -> TimeUpdateKey:
    r = _reader(data, KIND_UPDATE)
    t = r.u32()
    cover = read_cover(r, pk.tree)
    sub_keys = {node: sue.read_secret_key(r, pi.params, pk.t_max) for node in cover.nodes}
    r.finish()
    if any(key.time != t for key in sub_keys.values()):
        raise DecodeError("update key sub-keys disagree on the time")
    return TimeUpdateKey(time=t, cover=cover, sub_keys=sub_keys)


def encode_ciphertext(ct: RsabeCiphertext, pk: RsabePublicKey) -> bytes:
    """Shared C_0 stored once, ahead of both headers"""
    if ct.abe_header.c0 != ct.sue_header.c0:
        raise ParameterError("ciphertext headers do not share C_0")
    w = _writer(KIND_CIPHERTEXT)
    w.u32(ct.time).element(ct.abe_header.c0)
    kp_abe.write_header(w, ct.abe_header, pk.universe, include_c0=False)
    sue.write_header(w, ct.sue_header, include_c0=False)
    w.target(ct.c)
    return w.getvalue()


def decode_ciphertext(data: bytes, pi: PublicInfo, pk: RsabePublicKey) -> RsabeCiphertext:
    r = _reader(data, KIND_CIPHERTEXT)
    params = pi.params
    t = r.u32()
    c0 = r.element(params)
    abe_header = kp_abe.read_header(r, pk.universe, params, c0=c0)
    sue_header = sue.read_header(r, params, pk.t_max, c0=c0)
    c = r.target(params)
    r.finish()
    if sue_header.time != t:
        raise DecodeError("ciphertext time disagrees with its SUE header")
    return RsabeCiphertext(attributes=abe_header.attributes, time=t, abe_header=abe_header,
                           sue_header=sue_header, c=c)
