"""
Supersingular curve y^2 = x^3 + x over F_q and its reduced Tate pairing
Points are affine (x, y) tuples of mpz; None is the point at infinity
"""

from typing import Optional, Tuple

import gmpy2
from gmpy2 import mpz

from crypto.fields import FQ2_ONE, Fq2, fq2_conj, fq2_inv, fq2_mul, fq2_pow, fq2_sqr

Point = Optional[Tuple[mpz, mpz]]


def is_on_curve(pt: Point, q) -> bool:
    if pt is None:
        return True
    x, y = pt
    if not (0 <= x < q and 0 <= y < q):
        return False
    return (y * y - x * x * x - x) % q == 0


def point_neg(pt: Point, q) -> Point:
    if pt is None:
        return None
    x, y = pt
    return (x, (-y) % q)


def point_add(p1: Point, p2: Point, q) -> Point:
    """Affine chord-and-tangent addition"""
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if (y1 + y2) % q == 0:
            return None
        lam = (3 * x1 * x1 + 1) * gmpy2.invert(2 * y1, q) % q
    else:
        lam = (y2 - y1) * gmpy2.invert(x2 - x1, q) % q
    x3 = (lam * lam - x1 - x2) % q
    y3 = (lam * (x1 - x3) - y1) % q
    return (x3, y3)


def _jacobian_double(X, Y, Z, q):
    if Y == 0 or Z == 0:
        return mpz(1), mpz(1), mpz(0)
    YY = Y * Y % q
    S = 4 * X * YY % q
    ZZ = Z * Z % q
    M = (3 * X * X + ZZ * ZZ) % q
    X3 = (M * M - 2 * S) % q
    Y3 = (M * (S - X3) - 8 * YY * YY) % q
    Z3 = 2 * Y * Z % q
    return X3, Y3, Z3


def _jacobian_add_affine(X1, Y1, Z1, x2, y2, q):
    # mixed addition, second operand has Z = 1
    if Z1 == 0:
        return x2, y2, mpz(1)
    Z1Z1 = Z1 * Z1 % q
    U2 = x2 * Z1Z1 % q
    S2 = y2 * Z1 * Z1Z1 % q
    H = (U2 - X1) % q
    R = (S2 - Y1) % q
    if H == 0:
        if R == 0:
            return _jacobian_double(X1, Y1, Z1, q)
        return mpz(1), mpz(1), mpz(0)
    HH = H * H % q
    HHH = H * HH % q
    V = X1 * HH % q
    X3 = (R * R - HHH - 2 * V) % q
    Y3 = (R * (V - X3) - Y1 * HHH) % q
    Z3 = Z1 * H % q
    return X3, Y3, Z3


def point_mul(pt: Point, k: int, q) -> Point:
    """Scalar multiplication; k must be non-negative"""
    if pt is None or k == 0:
        return None
    x, y = pt
    X, Y, Z = mpz(1), mpz(1), mpz(0)
    for bit in bin(k)[2:]:
        X, Y, Z = _jacobian_double(X, Y, Z, q)
        if bit == '1':
            X, Y, Z = _jacobian_add_affine(X, Y, Z, x, y, q)
    if Z == 0:
        return None
    z_inv = gmpy2.invert(Z, q)
    z_inv2 = z_inv * z_inv % q
    return (X * z_inv2 % q, Y * z_inv2 * z_inv % q)


def _line_at_distorted(T: Tuple[mpz, mpz], lam, xq, yq, q) -> Fq2:
    # line through T with slope lam, evaluated at (-xq, i*yq)
    xt, yt = T
    return ((lam * (xq + xt) - yt) % q, yq)


def miller_loop(P: Point, Q: Point, n: int, q) -> Fq2:
    """f_{n,P} evaluated at the distortion image of Q, vertical lines dropped"""
    if P is None or Q is None:
        return FQ2_ONE
    xq, yq = Q
    xp, yp = P
    f = FQ2_ONE
    T = P
    for bit in bin(n)[3:]:
        f = fq2_sqr(f, q)
        if T is not None:
            xt, yt = T
            if yt == 0:
                T = None
            else:
                lam = (3 * xt * xt + 1) * gmpy2.invert(2 * yt, q) % q
                f = fq2_mul(f, _line_at_distorted(T, lam, xq, yq, q), q)
                x3 = (lam * lam - 2 * xt) % q
                T = (x3, (lam * (xt - x3) - yt) % q)
        if bit == '1':
            if T is None:
                T = P
                continue
            xt, yt = T
            if xt == xp:
                if (yt + yp) % q == 0:
                    T = None
                    continue
                lam = (3 * xt * xt + 1) * gmpy2.invert(2 * yt, q) % q
            else:
                lam = (yp - yt) * gmpy2.invert(xp - xt, q) % q
            f = fq2_mul(f, _line_at_distorted(T, lam, xq, yq, q), q)
            x3 = (lam * lam - xt - xp) % q
            T = (x3, (lam * (xt - x3) - yt) % q)
    return f


def final_exponentiation(f: Fq2, cofactor: int, q) -> Fq2:
    """f^((q^2 - 1)/n) computed as (conj(f)/f)^((q + 1)/n)"""
    g = fq2_mul(fq2_conj(f, q), fq2_inv(f, q), q)
    return fq2_pow(g, cofactor, q)


def tate_pairing(P: Point, Q: Point, n: int, cofactor: int, q) -> Fq2:
    """Symmetric pairing e(P, Q) = Tate(P, phi(Q)) with phi(x, y) = (-x, i*y)"""
    if P is None or Q is None:
        return FQ2_ONE
    return final_exponentiation(miller_loop(P, Q, n, q), cofactor, q)
