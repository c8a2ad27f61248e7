"""
Composite-order bilinear group of order N = p1*p2*p3
Descriptor generation, group elements, target elements and subgroup sampling
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Optional, Tuple

import gmpy2
from Crypto.Util.number import getPrime
from gmpy2 import mpz

from config import Config
from crypto.curve import Point, is_on_curve, point_add, point_mul, point_neg, tate_pairing
from crypto.fields import FQ2_ONE, Fq2, fq2_inv, fq2_mul, fq2_pow, fq_sqrt
from scheme.errors import ParameterError
from utils.helpers import Rng, make_rng

logger = logging.getLogger(__name__)

# Residue mod N (or mod a single prime factor where stated)
Scalar = int


@dataclass(frozen=True)
class CurveParams:
    """Public curve context: base prime q and group order N"""
    q: int
    n: int

    @property
    def cofactor(self) -> int:
        return (self.q + 1) // self.n


@dataclass(frozen=True)
class GroupElement:
    """Point of the order-N subgroup of E(F_q), or the identity"""
    point: Point
    params: CurveParams

    @property
    def is_identity(self) -> bool:
        return self.point is None

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return group_mul(self, other)

    def __pow__(self, k: int) -> "GroupElement":
        return group_exp(self, k)

    def __invert__(self) -> "GroupElement":
        return group_inv(self)

    def __truediv__(self, other: "GroupElement") -> "GroupElement":
        return group_mul(self, group_inv(other))

    def __repr__(self):
        if self.point is None:
            return "GroupElement(identity)"
        return f"GroupElement(x={int(self.point[0])}, y={int(self.point[1])})"


@dataclass(frozen=True)
class TargetElement:
    """Element of the order-N subgroup of F_q2^*"""
    value: Fq2
    params: CurveParams

    @property
    def is_one(self) -> bool:
        return self.value[0] == 1 and self.value[1] == 0

    def __mul__(self, other: "TargetElement") -> "TargetElement":
        return TargetElement(fq2_mul(self.value, other.value, self.params.q), self.params)

    def __truediv__(self, other: "TargetElement") -> "TargetElement":
        return self * other.inverse()

    def __pow__(self, k: int) -> "TargetElement":
        return TargetElement(fq2_pow(self.value, int(k) % self.params.n, self.params.q), self.params)

    def inverse(self) -> "TargetElement":
        return TargetElement(fq2_inv(self.value, self.params.q), self.params)

    def __repr__(self):
        return f"TargetElement({int(self.value[0])} + {int(self.value[1])}i)"


def identity(params: CurveParams) -> GroupElement:
    return GroupElement(None, params)


def target_one(params: CurveParams) -> TargetElement:
    return TargetElement(FQ2_ONE, params)


def group_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    return GroupElement(point_add(a.point, b.point, a.params.q), a.params)


def group_exp(a: GroupElement, k: int) -> GroupElement:
    return GroupElement(point_mul(a.point, int(k) % a.params.n, a.params.q), a.params)


def group_inv(a: GroupElement) -> GroupElement:
    return GroupElement(point_neg(a.point, a.params.q), a.params)


def pair(a: GroupElement, b: GroupElement) -> TargetElement:
    """Symmetric bilinear map e: G x G -> G_T"""
    params = a.params
    value = tate_pairing(a.point, b.point, params.n, params.cofactor, params.q)
    return TargetElement(value, params)


def order_divides(x, m: int) -> bool:
    """True when x^m is the identity (group or target element)"""
    if isinstance(x, GroupElement):
        return point_mul(x.point, m, x.params.q) is None
    return TargetElement(fq2_pow(x.value, m, x.params.q), x.params).is_one


def has_exact_order(x, m: int, prime_factors: Tuple[int, ...]) -> bool:
    """x^m = 1 and x^(m/p) != 1 for every prime p dividing m"""
    if not order_divides(x, m):
        return False
    return all(not order_divides(x, m // p) for p in prime_factors if m % p == 0)


class Subgroup(str, Enum):
    P1 = "p1"
    P2 = "p2"
    P3 = "p3"
    P1P3 = "p1p3"
    P1P2 = "p1p2"
    FULL = "full"


@dataclass(frozen=True)
class GroupDescriptor:
    """((N, G, G_T, e), p1, p2, p3, g1, g2, g3) over a concrete curve"""
    q: int
    p1: int
    p2: int
    p3: int
    g_bar1: GroupElement
    g_bar2: GroupElement
    g_bar3: GroupElement

    @property
    def n(self) -> int:
        return self.p1 * self.p2 * self.p3

    @property
    def params(self) -> CurveParams:
        return self.g_bar1.params

    @property
    def primes(self) -> Tuple[int, int, int]:
        return (self.p1, self.p2, self.p3)

    @cached_property
    def g_full(self) -> GroupElement:
        return self.g_bar1 * self.g_bar2 * self.g_bar3

    def public_info(self) -> "PublicInfo":
        return PublicInfo(q=self.q, n=self.n)


@dataclass(frozen=True)
class PublicInfo:
    """Descriptor view without the factorization of N"""
    q: int
    n: int

    @property
    def params(self) -> CurveParams:
        return CurveParams(q=mpz(self.q), n=mpz(self.n))


def _random_curve_point(q, rng: Rng) -> Point:
    for _ in range(Config.POINT_SEARCH_ATTEMPTS):
        x = mpz(rng.randrange(0, q))
        y = fq_sqrt(x * x * x + x, q)
        if y is None or y == 0:
            continue
        if rng.getrandbits(1):
            y = (-y) % q
        return (x, y)
    raise ParameterError("could not find a curve point (retry budget exhausted)")


def gen_descriptor(lam: int = Config.DEFAULT_LAMBDA, rng: Optional[Rng] = None,
                   seed: Optional[int] = None) -> GroupDescriptor:
    """Sample three lam-bit primes and a supersingular curve carrying an order-N subgroup"""
    if lam < Config.MIN_LAMBDA:
        raise ParameterError(f"lambda must be at least {Config.MIN_LAMBDA}, got {lam}")
    if rng is None:
        rng = make_rng(seed)

    primes = []
    while len(primes) < 3:
        p = getPrime(lam, randfunc=rng.randbytes)
        if p not in primes:
            primes.append(p)
    p1, p2, p3 = primes
    n = mpz(p1) * p2 * p3

    # N is odd, so q = c*N - 1 = 3 (mod 4) needs c = 0 (mod 4)
    q = None
    for k in range(1, Config.PARAM_SEARCH_ATTEMPTS + 1):
        candidate = 4 * k * n - 1
        if gmpy2.is_prime(candidate):
            q = candidate
            break
    if q is None:
        raise ParameterError("no prime q = c*N - 1 found (retry budget exhausted)")
    params = CurveParams(q=q, n=n)
    logger.info(f"[SETUP] q has {q.bit_length()} bits, cofactor {params.cofactor}")

    for _ in range(Config.POINT_SEARCH_ATTEMPTS):
        g = point_mul(_random_curve_point(q, rng), params.cofactor, q)
        if g is None:
            continue
        if point_mul(g, n, q) is not None:
            continue
        if any(point_mul(g, n // p, q) is None for p in primes):
            continue
        g_bars = [GroupElement(point_mul(g, n // p, q), params) for p in primes]
        descriptor = GroupDescriptor(q=int(q), p1=p1, p2=p2, p3=p3,
                                     g_bar1=g_bars[0], g_bar2=g_bars[1], g_bar3=g_bars[2])
        logger.info(f"[SETUP] ✅ group descriptor ready (N has {n.bit_length()} bits)")
        return descriptor
    raise ParameterError("no generator of the order-N subgroup found (retry budget exhausted)")


def sample_subgroup(descriptor: GroupDescriptor, which, rng: Rng) -> GroupElement:
    """Uniform element of G_p1, G_p2, G_p3, G_p1p3, G_p1p2 or G"""
    which = Subgroup(which)
    if which == Subgroup.FULL:
        return descriptor.g_full ** rng.randrange(0, descriptor.n)
    parts = {
        Subgroup.P1: ((descriptor.g_bar1, descriptor.p1),),
        Subgroup.P2: ((descriptor.g_bar2, descriptor.p2),),
        Subgroup.P3: ((descriptor.g_bar3, descriptor.p3),),
        Subgroup.P1P3: ((descriptor.g_bar1, descriptor.p1), (descriptor.g_bar3, descriptor.p3)),
        Subgroup.P1P2: ((descriptor.g_bar1, descriptor.p1), (descriptor.g_bar2, descriptor.p2)),
    }[which]
    result = identity(descriptor.params)
    for generator, order in parts:
        result = result * generator ** rng.randrange(1, order)
    return result


def random_target(base: TargetElement, rng: Rng) -> TargetElement:
    """Uniform element of the subgroup generated by base"""
    return base ** rng.randrange(0, base.params.n)
