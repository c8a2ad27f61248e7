"""
Complete-subset revocation over a perfect binary user tree
Nodes are numbered breadth-first from the root (0); users are 1-based
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Tuple

from crypto.codec import ByteReader, ByteWriter
from scheme.errors import DecodeError, ParameterError


@dataclass(frozen=True)
class UserTree:
    depth: int

    @property
    def n_max(self) -> int:
        return 1 << self.depth

    @property
    def node_count(self) -> int:
        return (1 << (self.depth + 1)) - 1

    @property
    def first_leaf(self) -> int:
        return (1 << self.depth) - 1

    def check_user(self, u: int) -> None:
        if not 1 <= u <= self.n_max:
            raise ParameterError(f"user index {u} outside 1..{self.n_max}")

    def leaf_of(self, u: int) -> int:
        self.check_user(u)
        return self.first_leaf + (u - 1)

    def is_leaf(self, node: int) -> bool:
        return node >= self.first_leaf

    def children(self, node: int) -> Tuple[int, int]:
        return (2 * node + 1, 2 * node + 2)

    def parent(self, node: int) -> int:
        return (node - 1) // 2

    def node_depth(self, node: int) -> int:
        return (node + 1).bit_length() - 1

    def users_under(self, node: int) -> range:
        """Users whose leaf lies in the subtree of node"""
        if not 0 <= node < self.node_count:
            raise ParameterError(f"node {node} outside the tree")
        height = self.depth - self.node_depth(node)
        lo = node
        for _ in range(height):
            lo = 2 * lo + 1
        start = lo - self.first_leaf + 1
        return range(start, start + (1 << height))


@dataclass(frozen=True)
class PrivateSet:
    """Leaf-to-root path of a user (PV_u)"""
    user: int
    nodes: Tuple[int, ...]


@dataclass(frozen=True)
class CoverSet:
    """Subtrees partitioning the non-revoked users (CV_R)"""
    revoked: FrozenSet[int]
    nodes: Tuple[int, ...]


def cs_setup(n_max: int) -> UserTree:
    if n_max < 2 or n_max & (n_max - 1):
        raise ParameterError(f"N_max must be a power of two >= 2, got {n_max}")
    return UserTree(depth=n_max.bit_length() - 1)


def cs_assign(tree: UserTree, u: int) -> PrivateSet:
    node = tree.leaf_of(u)
    path = [node]
    while node:
        node = tree.parent(node)
        path.append(node)
    return PrivateSet(user=u, nodes=tuple(path))


def cs_cover(tree: UserTree, revoked: Iterable[int]) -> CoverSet:
    revoked = frozenset(revoked)
    steiner = {0}
    for u in revoked:
        node = tree.leaf_of(u)
        while node not in steiner:
            steiner.add(node)
            node = tree.parent(node)
    cover = []
    for node in steiner:
        if tree.is_leaf(node):
            continue
        cover.extend(child for child in tree.children(node) if child not in steiner)
    return CoverSet(revoked=revoked, nodes=tuple(sorted(cover)))


def cs_match(cover: CoverSet, pv: PrivateSet) -> Optional[int]:
    common = set(cover.nodes).intersection(pv.nodes)
    if not common:
        return None
    if len(common) > 1:
        raise ParameterError("cover and private set intersect in more than one node")
    return common.pop()


def write_node_list(w: ByteWriter, nodes: Iterable[int]) -> None:
    nodes = sorted(nodes)
    w.u32(len(nodes))
    for node in nodes:
        w.u32(node)


def read_node_list(r: ByteReader, tree: UserTree) -> Tuple[int, ...]:
    count = r.u32()
    if count > tree.node_count:
        raise DecodeError("node list longer than the tree")
    nodes = tuple(r.u32() for _ in range(count))
    if list(nodes) != sorted(set(nodes)) or any(n >= tree.node_count for n in nodes):
        raise DecodeError("node list is not a sorted set of tree nodes")
    return nodes


def write_private_set(w: ByteWriter, pv: PrivateSet) -> None:
    w.u32(pv.user)
    write_node_list(w, pv.nodes)


def read_private_set(r: ByteReader, tree: UserTree) -> PrivateSet:
    user = r.u32()
    if not 1 <= user <= tree.n_max:
        raise DecodeError("user index out of range")
    # leaf-to-root order is the descending order of indices
    nodes = tuple(sorted(read_node_list(r, tree), reverse=True))
    if nodes != cs_assign(tree, user).nodes:
        raise DecodeError("private set is not the path of its user")
    return PrivateSet(user=user, nodes=nodes)


def write_cover(w: ByteWriter, cover: CoverSet) -> None:
    write_node_list(w, cover.revoked)
    write_node_list(w, cover.nodes)


def read_cover(r: ByteReader, tree: UserTree) -> CoverSet:
    count = r.u32()
    revoked = tuple(r.u32() for _ in range(count))
    if any(not 1 <= u <= tree.n_max for u in revoked) or list(revoked) != sorted(set(revoked)):
        raise DecodeError("revoked list is not a sorted set of users")
    nodes = read_node_list(r, tree)
    cover = cs_cover(tree, revoked)
    if cover.nodes != nodes:
        raise DecodeError("cover does not match its revoked set")
    return cover
