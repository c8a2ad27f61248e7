"""
Canonical binary encoding for scalars, group elements, target elements and descriptors
All multi-byte integers are big-endian
"""

import struct
from typing import List, Optional

import gmpy2
from gmpy2 import mpz

from crypto.curve import is_on_curve
from crypto.group import (CurveParams, GroupDescriptor, GroupElement,
                          TargetElement, has_exact_order, order_divides)
from scheme.errors import DecodeError

DESCRIPTOR_MAGIC = b"RSABEGD1"

TAG_IDENTITY = 0x00
TAG_AFFINE = 0x01


class ByteWriter:
    """Accumulates an encoding"""

    def __init__(self):
        self._parts: List[bytes] = []

    def raw(self, data: bytes) -> "ByteWriter":
        self._parts.append(bytes(data))
        return self

    def u8(self, value: int) -> "ByteWriter":
        return self.raw(struct.pack(">B", value))

    def u16(self, value: int) -> "ByteWriter":
        return self.raw(struct.pack(">H", value))

    def u32(self, value: int) -> "ByteWriter":
        return self.raw(struct.pack(">I", value))

    def u64(self, value: int) -> "ByteWriter":
        return self.raw(struct.pack(">Q", value))

    def scalar(self, value: int) -> "ByteWriter":
        value = int(value)
        if value < 0:
            raise ValueError("scalars are non-negative residues")
        magnitude = value.to_bytes((value.bit_length() + 7) // 8, "big")
        return self.u16(len(magnitude)).raw(magnitude)

    def text(self, value: str) -> "ByteWriter":
        data = value.encode("utf-8")
        return self.u32(len(data)).raw(data)

    def blob(self, data: bytes) -> "ByteWriter":
        return self.u32(len(data)).raw(data)

    def element(self, x: GroupElement) -> "ByteWriter":
        if x.point is None:
            return self.u8(TAG_IDENTITY)
        self.u8(TAG_AFFINE)
        return self.scalar(x.point[0]).scalar(x.point[1])

    def target(self, t: TargetElement) -> "ByteWriter":
        return self.scalar(t.value[0]).scalar(t.value[1])

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class ByteReader:
    """Consumes an encoding, raising DecodeError on any malformation"""

    def __init__(self, data: bytes):
        self._data = memoryview(bytes(data))
        self._pos = 0

    @property
    def remaining(self) -> int:
        return len(self._data) - self._pos

    def take(self, count: int) -> bytes:
        if count < 0 or self._pos + count > len(self._data):
            raise DecodeError(f"truncated input: wanted {count} bytes at offset {self._pos}")
        chunk = self._data[self._pos:self._pos + count].tobytes()
        self._pos += count
        return chunk

    def u8(self) -> int:
        return struct.unpack(">B", self.take(1))[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack(">Q", self.take(8))[0]

    def expect(self, magic: bytes) -> None:
        found = self.take(len(magic))
        if found != magic:
            raise DecodeError(f"bad magic tag {found!r}, expected {magic!r}")

    def scalar(self, modulus: Optional[int] = None) -> int:
        magnitude = self.take(self.u16())
        if magnitude[:1] == b"\x00":
            raise DecodeError("non-canonical scalar (leading zero byte)")
        value = int.from_bytes(magnitude, "big")
        if modulus is not None and value >= modulus:
            raise DecodeError("scalar out of range")
        return value

    def text(self) -> str:
        try:
            return self.take(self.u32()).decode("utf-8")
        except UnicodeDecodeError as e:
            raise DecodeError(f"invalid text field: {e}") from e

    def blob(self) -> bytes:
        return self.take(self.u32())

    def element(self, params: CurveParams) -> GroupElement:
        tag = self.u8()
        if tag == TAG_IDENTITY:
            return GroupElement(None, params)
        if tag != TAG_AFFINE:
            raise DecodeError(f"unknown element tag {tag:#04x}")
        x = mpz(self.scalar(params.q))
        y = mpz(self.scalar(params.q))
        if not is_on_curve((x, y), params.q):
            raise DecodeError("point is not on the curve")
        element = GroupElement((x, y), params)
        if not order_divides(element, params.n):
            raise DecodeError("point is not in the order-N subgroup")
        return element

    def target(self, params: CurveParams) -> TargetElement:
        re = mpz(self.scalar(params.q))
        im = mpz(self.scalar(params.q))
        t = TargetElement((re, im), params)
        if re == 0 and im == 0:
            raise DecodeError("zero is not a target element")
        if not order_divides(t, params.n):
            raise DecodeError("target element order does not divide N")
        return t

    def finish(self) -> None:
        if self.remaining:
            raise DecodeError(f"{self.remaining} trailing bytes")


def serialize_scalar(value: int) -> bytes:
    return ByteWriter().scalar(value).getvalue()


def deserialize_scalar(data: bytes, modulus: Optional[int] = None) -> int:
    reader = ByteReader(data)
    value = reader.scalar(modulus)
    reader.finish()
    return value


def serialize_element(x: GroupElement) -> bytes:
    return ByteWriter().element(x).getvalue()


def deserialize_element(data: bytes, params: CurveParams) -> GroupElement:
    reader = ByteReader(data)
    x = reader.element(params)
    reader.finish()
    return x


def serialize_target(t: TargetElement) -> bytes:
    return ByteWriter().target(t).getvalue()


def deserialize_target(data: bytes, params: CurveParams) -> TargetElement:
    reader = ByteReader(data)
    t = reader.target(params)
    reader.finish()
    return t


def serialize_descriptor(descriptor: GroupDescriptor) -> bytes:
    w = ByteWriter().raw(DESCRIPTOR_MAGIC)
    w.scalar(descriptor.q).scalar(descriptor.n)
    w.scalar(descriptor.p1).scalar(descriptor.p2).scalar(descriptor.p3)
    w.element(descriptor.g_bar1).element(descriptor.g_bar2).element(descriptor.g_bar3)
    return w.getvalue()


def deserialize_descriptor(data: bytes) -> GroupDescriptor:
    reader = ByteReader(data)
    reader.expect(DESCRIPTOR_MAGIC)
    q = mpz(reader.scalar())
    n = mpz(reader.scalar())
    primes = tuple(reader.scalar() for _ in range(3))
    if len(set(primes)) != 3 or not all(gmpy2.is_prime(p) for p in primes):
        raise DecodeError("descriptor primes are not three distinct primes")
    if primes[0] * primes[1] * primes[2] != n:
        raise DecodeError("N does not equal p1*p2*p3")
    if not gmpy2.is_prime(q) or q % 4 != 3 or (q + 1) % n != 0:
        raise DecodeError("base prime q is inconsistent with N")
    params = CurveParams(q=q, n=n)
    g_bars = [reader.element(params) for _ in range(3)]
    reader.finish()
    for g_bar, p in zip(g_bars, primes):
        if not has_exact_order(g_bar, p, (p,)):
            raise DecodeError("subgroup generator has the wrong order")
    return GroupDescriptor(q=int(q), p1=primes[0], p2=primes[1], p3=primes[2],
                           g_bar1=g_bars[0], g_bar2=g_bars[1], g_bar3=g_bars[2])

