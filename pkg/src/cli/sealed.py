"""
Sealed files: an RS-ABE ciphertext of a random session element plus a hash-based DEM
"""

import hashlib
import hmac
import logging
from dataclasses import dataclass, replace
from typing import FrozenSet, Iterable

from Crypto.Util.strxor import strxor

from config import Config
from crypto.codec import ByteReader, ByteWriter, serialize_target
from crypto.group import PublicInfo, TargetElement, random_target
from scheme import encoding
from scheme.errors import DecodeError, IntegrityError, ParameterError
from scheme.rsabe import RsabePrivateKey, RsabePublicKey, TimeUpdateKey, rsabe_decrypt, rsabe_encrypt, \
    rsabe_update_ct
from utils.helpers import Rng

logger = logging.getLogger(__name__)

SEALED_MAGIC = b"RSABESF1"
TAG_DOMAIN = b"\xff"


def _hasher(hash_name: str):
    try:
        return hashlib.new(hash_name)
    except ValueError as e:
        raise ParameterError(f"unknown hash {hash_name!r}") from e


def _session_key(session: TargetElement, hash_name: str) -> bytes:
    h = _hasher(hash_name)
    h.update(serialize_target(session))
    return h.digest()


def _keystream(key: bytes, length: int, hash_name: str) -> bytes:
    blocks = []
    produced, counter = 0, 0
    while produced < length:
        h = _hasher(hash_name)
        h.update(key + counter.to_bytes(8, "big"))
        block = h.digest()
        blocks.append(block)
        produced += len(block)
        counter += 1
    return b"".join(blocks)[:length]


def _tag(key: bytes, body: bytes, hash_name: str) -> bytes:
    h = _hasher(hash_name)
    h.update(key + TAG_DOMAIN + body)
    return h.digest()


def kem_dem_seal(session: TargetElement, plaintext: bytes, hash_name: str = Config.HASH_NAME) -> bytes:
    """Encrypted body followed by its tag"""
    key = _session_key(session, hash_name)
    body = strxor(plaintext, _keystream(key, len(plaintext), hash_name)) if plaintext else b""
    return body + _tag(key, body, hash_name)


def kem_dem_open(session: TargetElement, payload: bytes, hash_name: str = Config.HASH_NAME) -> bytes:
    """Verify the tag, then decrypt; nothing is returned on a mismatch"""
    size = _hasher(hash_name).digest_size
    if len(payload) < size:
        raise IntegrityError("sealed payload is shorter than its tag")
    body, tag = payload[:-size], payload[-size:]
    key = _session_key(session, hash_name)
    if not hmac.compare_digest(tag, _tag(key, body, hash_name)):
        raise IntegrityError("sealed payload failed its integrity check")
    return strxor(body, _keystream(key, len(body), hash_name)) if body else b""


@dataclass(frozen=True)
class SealedFile:
    version: int
    hash_name: str
    attributes: FrozenSet[str]
    time: int
    ciphertext: bytes
    payload: bytes

    def encode(self) -> bytes:
        w = ByteWriter().raw(SEALED_MAGIC).u8(self.version).text(self.hash_name)
        w.u32(len(self.attributes))
        for name in sorted(self.attributes):
            w.text(name)
        w.u32(self.time).blob(self.ciphertext).blob(self.payload)
        return w.getvalue()

    @classmethod
    def decode(cls, data: bytes) -> "SealedFile":
        r = ByteReader(data)
        r.expect(SEALED_MAGIC)
        version = r.u8()
        if version != Config.SEALED_FORMAT_VERSION:
            raise DecodeError(f"unsupported sealed file version {version}")
        hash_name = r.text()
        attributes = frozenset(r.text() for _ in range(r.u32()))
        time = r.u32()
        ciphertext, payload = r.blob(), r.blob()
        r.finish()
        return cls(version=version, hash_name=hash_name, attributes=attributes, time=time,
                   ciphertext=ciphertext, payload=payload)


def seal(pi: PublicInfo, pk: RsabePublicKey, plaintext: bytes, attributes: Iterable[str], t: int,
         rng: Rng, hash_name: str = Config.HASH_NAME) -> SealedFile:
    attributes = frozenset(attributes)
    session = random_target(pk.omega, rng)
    ct = rsabe_encrypt(pi, pk, session, attributes, t, rng)
    sealed = SealedFile(version=Config.SEALED_FORMAT_VERSION, hash_name=hash_name, attributes=attributes,
                        time=t, ciphertext=encoding.encode_ciphertext(ct, pk),
                        payload=kem_dem_seal(session, plaintext, hash_name))
    logger.info(f"[ENCRYPT] sealed {len(plaintext)} bytes for time {t}")
    return sealed


def _ciphertext(sealed: SealedFile, pi: PublicInfo, pk: RsabePublicKey):
    ct = encoding.decode_ciphertext(sealed.ciphertext, pi, pk)
    if ct.attributes != sealed.attributes or ct.time != sealed.time:
        raise DecodeError("sealed header disagrees with its ciphertext")
    return ct


def open_sealed(sealed: SealedFile, pi: PublicInfo, pk: RsabePublicKey, sk: RsabePrivateKey,
                tk: TimeUpdateKey) -> bytes:
    session = rsabe_decrypt(pi, _ciphertext(sealed, pi, pk), sk, tk)
    return kem_dem_open(session, sealed.payload, sealed.hash_name)


def update_sealed(sealed: SealedFile, pi: PublicInfo, pk: RsabePublicKey, rng: Rng) -> SealedFile:
    """Advance the ciphertext time by one; the DEM payload is untouched"""
    ct = rsabe_update_ct(pi, pk, _ciphertext(sealed, pi, pk), rng)
    return replace(sealed, time=ct.time, ciphertext=encoding.encode_ciphertext(ct, pk))
