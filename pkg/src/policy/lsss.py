"""
Linear secret sharing over Z_N
Compiles policy ASTs into (B, rho), generates shares and solves for reconstruction coefficients
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import gmpy2

from crypto.codec import ByteReader, ByteWriter
from policy.parser import And, Leaf, Or, PolicyExpr, Threshold, leaves, parse_policy, policy_to_text
from scheme.errors import DecodeError, ModulusFactorFound, NotAuthorized, ParameterError, PolicySyntaxError
from utils.helpers import Rng

logger = logging.getLogger(__name__)

# (attribute name, copy index starting at 1)
ExpandedAttribute = Tuple[str, int]


@dataclass(frozen=True)
class AttributeUniverse:
    """Attribute names with k copies each"""
    names: Tuple[str, ...]
    k: int

    def __post_init__(self):
        if not self.names:
            raise ParameterError("attribute universe is empty")
        if len(set(self.names)) != len(self.names):
            raise ParameterError("duplicate attribute names in universe")
        if self.k < 1:
            raise ParameterError("duplication bound must be at least 1")

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def expanded(self) -> List[ExpandedAttribute]:
        return [(name, c) for name in self.names for c in range(1, self.k + 1)]

    def expand(self, attributes: Iterable[str]) -> List[ExpandedAttribute]:
        """S' for an attribute set S, in universe order"""
        attributes = set(attributes)
        unknown = attributes - set(self.names)
        if unknown:
            raise ParameterError(f"unknown attributes: {', '.join(sorted(unknown))}")
        return [(name, c) for name in self.names if name in attributes for c in range(1, self.k + 1)]

    def id_of(self, attr: ExpandedAttribute) -> int:
        name, copy = attr
        return self.names.index(name) * self.k + (copy - 1)

    def from_id(self, attr_id: int) -> ExpandedAttribute:
        if not 0 <= attr_id < len(self.names) * self.k:
            raise DecodeError(f"attribute id {attr_id} out of range")
        return (self.names[attr_id // self.k], attr_id % self.k + 1)


@dataclass(frozen=True)
class AccessStructure:
    """LSSS matrix B (l x m) with row labels rho"""
    matrix: Tuple[Tuple[int, ...], ...]
    rho: Tuple[ExpandedAttribute, ...]
    policy: PolicyExpr
    duplication: int
    modulus: int

    @property
    def rows(self) -> int:
        return len(self.matrix)

    @property
    def cols(self) -> int:
        return len(self.matrix[0])

    def rows_for(self, attributes: Iterable[str]) -> List[int]:
        attributes = set(attributes)
        return [i for i, (name, _) in enumerate(self.rho) if name in attributes]


@dataclass(frozen=True)
class ShareVector:
    v: Tuple[int, ...]
    shares: Tuple[int, ...]


def compile_policy(expr: PolicyExpr, modulus: int, universe: Optional[AttributeUniverse] = None,
                   max_duplication: Optional[int] = None) -> AccessStructure:
    """Recursive construction: And splits v into (v||1) and (0..0,-1), Or copies v, Threshold adds a Vandermonde block"""
    if isinstance(expr, str):
        expr = parse_policy(expr)
    names = leaves(expr)
    if universe is not None:
        unknown = sorted(set(names) - set(universe.names))
        if unknown:
            raise ParameterError(f"unknown attributes in policy: {', '.join(unknown)}")
        if max_duplication is None:
            max_duplication = universe.k

    rows: List[Tuple[Dict[int, int], str]] = []
    width = 1

    def visit(node: PolicyExpr, vec: Dict[int, int]) -> None:
        nonlocal width
        if isinstance(node, Leaf):
            rows.append((vec, node.name))
        elif isinstance(node, Or):
            for child in node.children:
                visit(child, dict(vec))
        elif isinstance(node, And):
            if len(node.children) == 1:
                visit(node.children[0], vec)
                return
            col = width
            width += 1
            visit(node.children[0], {**vec, col: 1})
            rest = node.children[1:]
            visit(rest[0] if len(rest) == 1 else And(rest), {col: -1})
        elif isinstance(node, Threshold):
            if not 1 <= node.k <= len(node.children):
                raise ParameterError(f"threshold {node.k} of {len(node.children)} is out of range")
            base = width
            width += node.k - 1
            for j, child in enumerate(node.children, start=1):
                child_vec = dict(vec)
                for t in range(1, node.k):
                    child_vec[base + t - 1] = pow(j, t)
                visit(child, child_vec)
        else:
            raise ParameterError(f"not a policy node: {node!r}")

    visit(expr, {0: 1})

    matrix = tuple(tuple(vec.get(c, 0) % modulus for c in range(width)) for vec, _ in rows)
    copies: Dict[str, int] = {}
    rho = []
    for _, name in rows:
        copies[name] = copies.get(name, 0) + 1
        rho.append((name, copies[name]))
    duplication = max(copies.values())
    if max_duplication is not None and duplication > max_duplication:
        raise ParameterError(
            f"attribute repeated {duplication} times, more than the duplication bound {max_duplication}")

    logger.debug(f"[LSSS] compiled {len(matrix)}x{width} matrix, duplication {duplication}")
    return AccessStructure(matrix=matrix, rho=tuple(rho), policy=expr,
                           duplication=duplication, modulus=modulus)


def make_shares(structure: AccessStructure, secret: int, rng: Rng,
                randomness: Optional[Sequence[int]] = None) -> ShareVector:
    n = structure.modulus
    if randomness is None:
        randomness = [rng.randrange(0, n) for _ in range(structure.cols - 1)]
    v = (secret % n,) + tuple(r % n for r in randomness)
    shares = tuple(sum(b * x for b, x in zip(row, v)) % n for row in structure.matrix)
    return ShareVector(v=v, shares=shares)


def recon_coeffs(structure: AccessStructure, attributes: Iterable[str]) -> Dict[int, int]:
    """Nonzero omega_i with sum omega_i * B_i = (1, 0, ..., 0) over rows labelled by the set"""
    n = structure.modulus
    selected = structure.rows_for(attributes)
    if not selected:
        raise NotAuthorized("no key row matches the attribute set")
    m, k = structure.cols, len(selected)

    # Augmented system B_S^T omega = e_1, one equation per column of B
    aug = [[structure.matrix[i][c] for i in selected] + [1 if c == 0 else 0] for c in range(m)]
    pivots: List[int] = []
    r = 0
    for col in range(k):
        pivot = None
        factor = None
        for rr in range(r, m):
            value = aug[rr][col] % n
            if value == 0:
                continue
            g = gcd(value, n)
            if g == 1:
                pivot = rr
                break
            factor = factor or g
        if pivot is None:
            if factor is not None:
                raise ModulusFactorFound(factor)
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = int(gmpy2.invert(aug[r][col], n))
        aug[r] = [(x * inv) % n for x in aug[r]]
        for rr in range(m):
            if rr != r and aug[rr][col] % n:
                f = aug[rr][col]
                aug[rr] = [(x - f * y) % n for x, y in zip(aug[rr], aug[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break

    if any(aug[rr][k] % n for rr in range(r, m)):
        raise NotAuthorized("attribute set does not satisfy the access structure")

    omega = {}
    for row_index, col in enumerate(pivots):
        value = aug[row_index][k] % n
        if value:
            omega[selected[col]] = value
    return omega


def satisfies(structure: AccessStructure, attributes: Iterable[str]) -> bool:
    try:
        recon_coeffs(structure, attributes)
        return True
    except NotAuthorized:
        return False


def write_structure(w: ByteWriter, structure: AccessStructure, universe: AttributeUniverse) -> None:
    w.u32(structure.rows).u32(structure.cols)
    for row in structure.matrix:
        for value in row:
            w.scalar(value)
    for attr in structure.rho:
        w.u32(universe.id_of(attr))
    w.text(policy_to_text(structure.policy))


def read_structure(r: ByteReader, universe: AttributeUniverse, modulus: int) -> AccessStructure:
    rows, cols = r.u32(), r.u32()
    if rows < 1 or cols < 1:
        raise DecodeError("empty access structure")
    matrix = tuple(tuple(r.scalar(modulus) for _ in range(cols)) for _ in range(rows))
    rho = tuple(universe.from_id(r.u32()) for _ in range(rows))
    text = r.text()
    try:
        structure = compile_policy(parse_policy(text), modulus, universe)
    except (PolicySyntaxError, ParameterError) as e:
        raise DecodeError(f"stored policy is invalid: {e}") from e
    if structure.matrix != matrix or structure.rho != rho:
        raise DecodeError("access structure does not match its policy")
    return structure
