"""
Prime field and quadratic extension arithmetic
F_q2 = F_q[i] / (i^2 + 1), valid because q = 3 (mod 4)
"""

from typing import Optional, Tuple

import gmpy2
from gmpy2 import mpz

# (real, imaginary) pair of reduced residues
Fq2 = Tuple[mpz, mpz]

FQ2_ONE: Fq2 = (mpz(1), mpz(0))


def fq_inv(a, q) -> mpz:
    """Inverse in F_q; a must be nonzero mod q"""
    return gmpy2.invert(mpz(a), q)


def fq_sqrt(a, q) -> Optional[mpz]:
    """Square root in F_q for q = 3 (mod 4), None for non-residues"""
    a = mpz(a) % q
    if a == 0:
        return mpz(0)
    if gmpy2.legendre(a, q) != 1:
        return None
    return gmpy2.powmod(a, (q + 1) // 4, q)


def fq2(re, im, q) -> Fq2:
    return (mpz(re) % q, mpz(im) % q)


def fq2_mul(x: Fq2, y: Fq2, q) -> Fq2:
    # Karatsuba with i^2 = -1
    a, b = x
    c, d = y
    ac = a * c
    bd = b * d
    return ((ac - bd) % q, ((a + b) * (c + d) - ac - bd) % q)


def fq2_sqr(x: Fq2, q) -> Fq2:
    a, b = x
    return (((a + b) * (a - b)) % q, (2 * a * b) % q)


def fq2_conj(x: Fq2, q) -> Fq2:
    return (x[0], (-x[1]) % q)


def fq2_inv(x: Fq2, q) -> Fq2:
    a, b = x
    norm = (a * a + b * b) % q
    if norm == 0:
        raise ZeroDivisionError("inverse of zero in F_q2")
    t = gmpy2.invert(norm, q)
    return ((a * t) % q, (-b * t) % q)


def fq2_pow(x: Fq2, e: int, q) -> Fq2:
    """Left-to-right square and multiply"""
    if e < 0:
        x = fq2_inv(x, q)
        e = -e
    result = FQ2_ONE
    for bit in bin(e)[2:]:
        result = fq2_sqr(result, q)
        if bit == '1':
            result = fq2_mul(result, x, q)
    return result
