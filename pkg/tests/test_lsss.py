import random
from dataclasses import replace
from itertools import combinations

import pytest

from crypto.codec import ByteReader, ByteWriter
from policy.lsss import (AccessStructure, AttributeUniverse, compile_policy, make_shares, read_structure,
                         recon_coeffs, satisfies, write_structure)
from policy.parser import And, Leaf, Or, Threshold, evaluate
from scheme.errors import DecodeError, ModulusFactorFound, NotAuthorized, ParameterError

NAMES = ("a", "b", "c", "d", "e")


def random_policy(rng, depth=3):
    if depth == 0 or rng.random() < 0.3:
        return Leaf(rng.choice(NAMES))
    children = tuple(random_policy(rng, depth - 1) for _ in range(rng.randrange(2, 4)))
    kind = rng.randrange(3)
    if kind == 0:
        return And(children)
    if kind == 1:
        return Or(children)
    return Threshold(rng.randrange(1, len(children) + 1), children)


def all_subsets():
    for size in range(len(NAMES) + 1):
        yield from (frozenset(s) for s in combinations(NAMES, size))


def test_and_gate_matrix():
    structure = compile_policy("a AND b", 101)
    assert structure.matrix == ((1, 1), (0, 100))
    assert structure.rho == (("a", 1), ("b", 1))


def test_or_gate_copies_vector():
    structure = compile_policy("a OR b", 101)
    assert structure.matrix == ((1,), (1,))


def test_threshold_adds_vandermonde_block():
    structure = compile_policy("2 of (a, b, c)", 101)
    assert structure.matrix == ((1, 1), (1, 2), (1, 3))


def test_repeated_attribute_gets_copy_index():
    structure = compile_policy("(a AND b) OR (a AND c)", 101)
    assert [attr for attr in structure.rho if attr[0] == "a"] == [("a", 1), ("a", 2)]
    assert structure.duplication == 2


def test_random_policies_agree_with_ast(descriptor24):
    rng = random.Random(42)
    n = descriptor24.n
    for _ in range(200):
        expr = random_policy(rng)
        structure = compile_policy(expr, n)
        secret = rng.randrange(n)
        shares = make_shares(structure, secret, rng).shares
        for subset in all_subsets():
            expected = evaluate(expr, subset)
            assert satisfies(structure, subset) == expected
            if expected:
                omega = recon_coeffs(structure, subset)
                assert all(structure.rho[i][0] in subset for i in omega)
                assert sum(w * shares[i] for i, w in omega.items()) % n == secret


def test_unauthorized_set_raises(descriptor24):
    structure = compile_policy("a AND b", descriptor24.n)
    with pytest.raises(NotAuthorized):
        recon_coeffs(structure, {"a", "c"})
    with pytest.raises(NotAuthorized):
        recon_coeffs(structure, set())


def test_non_unit_pivot_reveals_factor(descriptor24):
    d = descriptor24
    structure = AccessStructure(matrix=((d.p1,),), rho=(("a", 1),), policy=Leaf("a"),
                                duplication=1, modulus=d.n)
    with pytest.raises(ModulusFactorFound) as info:
        recon_coeffs(structure, {"a"})
    assert info.value.factor == d.p1


def test_universe_limits():
    universe = AttributeUniverse(("a", "b", "c"), 2)
    assert universe.id_of(("b", 2)) == 3
    assert universe.from_id(3) == ("b", 2)
    with pytest.raises(ParameterError):
        universe.expand({"z"})
    with pytest.raises(ParameterError):
        compile_policy("a OR (a AND b) OR (a AND c)", 101, universe=universe)
    with pytest.raises(ParameterError):
        compile_policy("a AND z", 101, universe=universe)
    with pytest.raises(ParameterError):
        AttributeUniverse(("a", "a"), 1)


def test_structure_serialization(descriptor24):
    universe = AttributeUniverse(NAMES, 2)
    structure = compile_policy("(a AND b) OR 2 of (c, d, e)", descriptor24.n, universe=universe)
    w = ByteWriter()
    write_structure(w, structure, universe)
    r = ByteReader(w.getvalue())
    assert read_structure(r, universe, descriptor24.n) == structure
    r.finish()

    first = tuple((x + 1) % descriptor24.n for x in structure.matrix[0])
    tampered = replace(structure, matrix=(first,) + structure.matrix[1:])
    w = ByteWriter()
    write_structure(w, tampered, universe)
    with pytest.raises(DecodeError):
        read_structure(ByteReader(w.getvalue()), universe, descriptor24.n)
