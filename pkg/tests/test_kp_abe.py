import random
from dataclasses import replace
from itertools import combinations

import pytest

from crypto.codec import ByteReader, ByteWriter
from crypto.group import order_divides, pair
from policy.lsss import compile_policy
from policy.parser import And, Leaf, Or, Threshold, evaluate
from scheme import kp_abe
from scheme.errors import NotAuthorized, ParameterError

NAMES = ("a", "b", "c", "d", "e")


def random_policy(rng, depth=2):
    if depth == 0 or rng.random() < 0.3:
        return Leaf(rng.choice(NAMES))
    children = tuple(random_policy(rng, depth - 1) for _ in range(rng.randrange(2, 4)))
    kind = rng.randrange(3)
    if kind == 0:
        return And(children)
    if kind == 1:
        return Or(children)
    return Threshold(rng.randrange(1, len(children) + 1), children)


@pytest.fixture(scope="module")
def abe32(descriptor32):
    return kp_abe.abe_setup(descriptor32, NAMES, random.Random(8), max_duplication=4)


def test_random_policies_decrypt_to_lambda_s(descriptor32, abe32):
    mk, pk = abe32
    rng = random.Random(21)
    checked = 0
    while checked < 100:
        expr = random_policy(rng)
        structure = compile_policy(expr, descriptor32.n)
        if structure.duplication > pk.universe.k:
            continue
        attributes = frozenset(a for a in NAMES if rng.random() < 0.6)
        if not evaluate(expr, attributes):
            attributes = frozenset(NAMES)
        sk = kp_abe.abe_genkey(pk, mk, structure, rng)
        header, ek, s = kp_abe.abe_encrypt_random(pk, attributes, rng)
        assert ek == pk.Lambda ** s
        assert kp_abe.abe_decrypt(pk, sk, header) == ek
        assert kp_abe.key_size(sk) == 2 * structure.rows
        assert kp_abe.header_size(header) == len(pk.universe.expand(attributes)) + 1
        checked += 1


def test_unauthorized_subsets_all_fail(descriptor24, rng):
    mk, pk = kp_abe.abe_setup(descriptor24, NAMES, rng, max_duplication=2)
    expr = Or((And((Leaf("a"), Leaf("b"))), Threshold(2, (Leaf("c"), Leaf("d"), Leaf("e")))))
    sk = kp_abe.abe_genkey(pk, mk, compile_policy(expr, descriptor24.n, pk.universe), rng)
    for size in range(len(NAMES) + 1):
        for subset in combinations(NAMES, size):
            if evaluate(expr, subset):
                continue
            header, _, _ = kp_abe.abe_encrypt_random(pk, subset, rng)
            with pytest.raises(NotAuthorized):
                kp_abe.abe_decrypt(pk, sk, header)


def test_key_blinding_lives_in_p3(descriptor24, rng):
    mk, pk = kp_abe.abe_setup(descriptor24, NAMES, rng, max_duplication=2)
    structure = compile_policy("a AND b", descriptor24.n, pk.universe)
    blinded = kp_abe.abe_genkey(pk, mk, structure, rng)
    plain = kp_abe.abe_genkey(pk, mk, structure, rng, blind=False)
    p1 = descriptor24.p1
    assert all(order_divides(k1, p1) and order_divides(k2, p1) for k1, k2 in plain.components)
    assert not all(order_divides(k1, p1) for k1, _ in blinded.components)
    header, ek, _ = kp_abe.abe_encrypt_random(pk, {"a", "b"}, rng)
    assert kp_abe.abe_decrypt(pk, blinded, header) == ek == kp_abe.abe_decrypt(pk, plain, header)


def test_randomize_shifts_session(descriptor24, rng):
    mk, pk = kp_abe.abe_setup(descriptor24, NAMES, rng, max_duplication=2)
    sk = kp_abe.abe_genkey(pk, mk, compile_policy("c OR d", descriptor24.n, pk.universe), rng)
    header, ek, s = kp_abe.abe_encrypt_random(pk, {"d"}, rng)
    new_ek, new_header = kp_abe.abe_randomize(pk, ek, header, 12345)
    assert new_ek == pk.Lambda ** (s + 12345)
    assert kp_abe.abe_decrypt(pk, sk, new_header) == new_ek


def test_genkey_rejects_bad_labellings(descriptor24, rng):
    mk, pk = kp_abe.abe_setup(descriptor24, NAMES, rng, max_duplication=2)
    too_many = compile_policy("a OR a OR a", descriptor24.n)
    with pytest.raises(ParameterError):
        kp_abe.abe_genkey(pk, mk, too_many, rng)
    structure = compile_policy("a OR b", descriptor24.n, pk.universe)
    repeated = replace(structure, rho=(("a", 1), ("a", 1)))
    with pytest.raises(ParameterError):
        kp_abe.abe_genkey(pk, mk, repeated, rng)


def test_key_and_header_serialization(descriptor24, rng):
    mk, pk = kp_abe.abe_setup(descriptor24, NAMES, rng, max_duplication=2)
    sk = kp_abe.abe_genkey(pk, mk, compile_policy("(a AND b) OR e", descriptor24.n, pk.universe), rng)
    header, _, _ = kp_abe.abe_encrypt_random(pk, {"b", "e"}, rng)

    w = ByteWriter()
    kp_abe.write_secret_key(w, sk, pk.universe)
    kp_abe.write_header(w, header, pk.universe)
    r = ByteReader(w.getvalue())
    assert kp_abe.read_secret_key(r, pk.universe, pk.params) == sk
    assert kp_abe.read_header(r, pk.universe, pk.params) == header
    r.finish()


def test_header_components_are_consistent(descriptor24, rng):
    _, pk = kp_abe.abe_setup(descriptor24, NAMES, rng, max_duplication=3)
    for attributes in ({"a"}, {"b", "d", "e"}, set(NAMES)):
        header, _, _ = kp_abe.abe_encrypt_random(pk, attributes, rng)
        assert set(header.c1) == set(pk.universe.expand(attributes))
        assert len(header.c1) == 3 * len(attributes)
        for a, c1 in header.c1.items():
            assert pair(c1, pk.g) == pair(pk.T[a], header.c0)


def test_setup_is_seed_deterministic(descriptor24):
    first = kp_abe.abe_setup(descriptor24, NAMES, random.Random(30))
    assert kp_abe.abe_setup(descriptor24, NAMES, random.Random(30)) == first
    other_mk, other_pk = kp_abe.abe_setup(descriptor24, NAMES, random.Random(31))
    assert other_mk != first[0]
    assert other_pk != first[1]
    assert other_pk.g != first[1].g
