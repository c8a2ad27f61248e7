import random

import pytest

from crypto.codec import ByteReader, ByteWriter
from scheme import sue
from scheme.errors import DecodeError, NoMatchingHeader, ParameterError


@pytest.fixture(scope="module")
def sue6(descriptor24):
    return sue.sue_setup(descriptor24, 6, random.Random(61))


def test_depth_and_labels():
    assert sue.sue_depth(6) == 2
    assert sue.sue_depth(7) == 3
    assert sue.sue_depth(14) == 3
    labels = [sue.time_to_label(t, 6) for t in range(7)]
    assert labels == ["", "0", "00", "01", "1", "10", "11"]
    assert [sue.label_to_time(label, 2) for label in labels] == list(range(7))


def test_label_helpers_reject_bad_input():
    with pytest.raises(ParameterError):
        sue.sue_depth(0)
    with pytest.raises(ParameterError):
        sue.time_to_label(7, 6)
    with pytest.raises(ParameterError):
        sue.label_to_time("012", 3)
    with pytest.raises(ParameterError):
        sue.label_to_time("000", 2)


def test_cover_labels():
    assert sue.cover_labels("01") == ["01", "1"]
    assert sue.cover_labels("") == [""]
    assert sue.cover_labels("010") == ["010", "1", "011"]


def test_exhaustive_decrypt_grid(sue6):
    mk, pk = sue6
    rng = random.Random(62)
    keys = [sue.sue_genkey(pk, mk, t, rng) for t in range(7)]
    for t in range(7):
        header, ek, _ = sue.sue_encrypt_random(pk, t, rng)
        assert sue.header_labels(header) == sue.cover_labels(sue.time_to_label(t, 6))
        for t_prime, sk in enumerate(keys):
            if t <= t_prime:
                assert sue.sue_decrypt(pk, sk, header, rng) == ek
            else:
                with pytest.raises(NoMatchingHeader):
                    sue.sue_decrypt(pk, sk, header, rng)


@pytest.mark.slow
def test_exhaustive_decrypt_grid_depth_three(descriptor24):
    mk, pk = sue.sue_setup(descriptor24, 14, random.Random(63))
    rng = random.Random(64)
    keys = [sue.sue_genkey(pk, mk, t, rng) for t in range(15)]
    for t in range(15):
        header, ek, _ = sue.sue_encrypt_random(pk, t, rng)
        for t_prime, sk in enumerate(keys):
            if t <= t_prime:
                assert sue.sue_decrypt(pk, sk, header, rng) == ek
            else:
                with pytest.raises(NoMatchingHeader):
                    sue.sue_decrypt(pk, sk, header, rng)


def test_sizes_within_bounds(sue6):
    mk, pk = sue6
    rng = random.Random(65)
    d_max = pk.d_max
    for t in range(7):
        assert sue.key_size(sue.sue_genkey(pk, mk, t, rng)) <= d_max + 2
        header, _, _ = sue.sue_encrypt_random(pk, t, rng)
        assert sue.header_size(header) <= 3 * d_max + 2


def test_encrypt_is_assemble_with_sampled_exponents(sue6):
    _, pk = sue6
    s = 4242
    for t in range(7):
        label = sue.time_to_label(t, 6)
        header, ek = sue.sue_encrypt(pk, t, s, random.Random(t))
        exponents = sue.LevelExponents.sample(label, sue._future_levels(label), pk.params.n, random.Random(t))
        assert header == sue.assemble_header(pk, t, s, exponents)
        assert ek == pk.Lambda ** s


def test_assemble_rejects_mismatched_exponents(sue6):
    _, pk = sue6
    with pytest.raises(ParameterError):
        sue.assemble_header(pk, 2, 1, sue.LevelExponents(main=(1,), future={}))


def test_randomize_adds_offsets(sue6):
    _, pk = sue6
    t, s, s_bar = 3, 100, 23
    label = sue.time_to_label(t, 6)
    base = sue.LevelExponents(main=(5, 7), future={1: 11})
    offsets = sue.LevelExponents(main=(2, 3), future={1: 13})
    header = sue.assemble_header(pk, t, s, base)
    randomized = sue.sue_randomize_ct(pk, header, s_bar, offsets=offsets)
    summed = sue.LevelExponents(main=(7, 10), future={1: 24})
    assert label == "01"
    assert randomized == sue.assemble_header(pk, t, s + s_bar, summed)


def test_randomize_needs_rng_or_offsets(sue6):
    _, pk = sue6
    header, _, _ = sue.sue_encrypt_random(pk, 1, random.Random(66))
    with pytest.raises(ParameterError):
        sue.sue_randomize_ct(pk, header, 0)


def test_update_chain_keeps_session(sue6):
    mk, pk = sue6
    rng = random.Random(67)
    keys = [sue.sue_genkey(pk, mk, t, rng) for t in range(7)]
    header, ek, _ = sue.sue_encrypt_random(pk, 0, rng)
    for t in range(1, 7):
        header = sue.sue_update_ct(pk, header, rng)
        assert header.time == t
        assert sue.header_labels(header) == sue.cover_labels(sue.time_to_label(t, 6))
        assert sue.sue_decrypt(pk, keys[t], header, rng) == ek
        with pytest.raises(NoMatchingHeader):
            sue.sue_decrypt(pk, keys[t - 1], header, rng)
    with pytest.raises(ParameterError):
        sue.sue_update_ct(pk, header, rng)


@pytest.mark.slow
def test_update_chain_depth_three(descriptor24):
    mk, pk = sue.sue_setup(descriptor24, 14, random.Random(68))
    rng = random.Random(69)
    header, ek, _ = sue.sue_encrypt_random(pk, 0, rng)
    for t in range(1, 15):
        header = sue.sue_update_ct(pk, header, rng)
        assert sue.header_labels(header) == sue.cover_labels(sue.time_to_label(t, 14))
        assert sue.sue_decrypt(pk, sue.sue_genkey(pk, mk, t, rng), header, rng) == ek
        assert sue.sue_decrypt(pk, sue.sue_genkey(pk, mk, 14, rng), header, rng) == ek


@pytest.mark.parametrize("t, t_prime", [(0, 6), (1, 2), (1, 3), (4, 5)])
def test_ancestor_subheader_session_matches_delegated(sue6, t, t_prime):
    mk, pk = sue6
    rng = random.Random(72)
    header, ek, _ = sue.sue_encrypt_random(pk, t, rng)
    sk = sue.sue_genkey(pk, mk, t_prime, rng)
    sub = sue.select_subheader(header, sk.label)
    assert len(sub.c2) < len(sk.k2)
    delegated = sue.delegate(pk, sub, sk.label[len(sub.label):], rng)
    assert delegated.label == sk.label
    assert sue.sue_session(sk, header.c0, sub) == ek
    assert sue.sue_session(sk, header.c0, delegated) == ek


def test_update_with_shift_moves_session(sue6):
    mk, pk = sue6
    rng = random.Random(70)
    header, ek, _ = sue.sue_encrypt_random(pk, 2, rng)
    updated = sue.sue_update_ct(pk, header, rng, s_bar=5)
    sk = sue.sue_genkey(pk, mk, 3, rng)
    assert sue.sue_decrypt(pk, sk, updated, rng) == ek * (pk.Lambda ** 5)


def test_unblinded_key_matches_blinded(sue6):
    mk, pk = sue6
    rng = random.Random(71)
    header, ek, _ = sue.sue_encrypt_random(pk, 1, rng)
    for blind in (True, False):
        assert sue.sue_decrypt(pk, sue.sue_genkey(pk, mk, 5, rng, blind=blind), header, rng) == ek


def test_key_and_header_serialization(sue6):
    mk, pk = sue6
    rng = random.Random(72)
    sk = sue.sue_genkey(pk, mk, 3, rng)
    header, _, _ = sue.sue_encrypt_random(pk, 2, rng)
    w = ByteWriter()
    sue.write_secret_key(w, sk)
    sue.write_header(w, header)
    r = ByteReader(w.getvalue())
    assert sue.read_secret_key(r, pk.params, 6) == sk
    assert sue.read_header(r, pk.params, 6) == header
    r.finish()


def test_header_with_wrong_futures_rejected(sue6):
    _, pk = sue6
    header, _, _ = sue.sue_encrypt_random(pk, 2, random.Random(73))
    w = ByteWriter()
    sue.write_header(w, header)
    data = bytearray(w.getvalue())
    # "00" relabelled as time 4 ("1")
    data[0:4] = (4).to_bytes(4, "big")
    with pytest.raises(DecodeError):
        sue.read_header(ByteReader(bytes(data)), pk.params, 6)
