import random

import pytest
from hypothesis import given, settings, strategies as st

from chainrewrite.algebra import field
from chainrewrite.algebra.groups import MOCK_Q, TOY_P, get_suite
from chainrewrite.chameleon import (
    R_BYTES,
    ChameleonError,
    ChamHash,
    ChamPublic,
    ChamTrapdoor,
    adapt_randomness,
    cham_adapt,
    cham_hash,
    cham_keygen,
    cham_public,
    cham_verify,
)


def test_keygen_deterministic(mock):
    td1, pub1 = cham_keygen(mock, random.Random(42))
    td2, pub2 = cham_keygen(mock, random.Random(42))
    assert td1 == td2 and pub1 == pub2
    assert len(td1.R) == R_BYTES


def test_public_key_is_g_to_hash(mock):
    td, pub = cham_keygen(mock, random.Random(1))
    assert pub.pk == mock.g ** field.hash_to_scalar(td.R, mock.q)


def test_trapdoor_hashing_to_five(mock):
    rng = random.Random(0)
    while True:
        R = rng.getrandbits(256).to_bytes(32, "big")
        if field.hash_to_scalar(R, MOCK_Q) == 5:
            break
    assert mock.dlog(cham_public(mock, ChamTrapdoor(R)).pk) == 5


def test_zero_message_zero_randomness(mock, rng):
    _, pub = cham_keygen(mock, rng)
    assert cham_hash(pub, 0, r=0).b.is_identity()


def test_toy_modexp_example(toy):
    pub = ChamPublic(toy.g ** 5)
    h = cham_hash(pub, 10, r=3)
    assert h.b.value == pow(2, 25, TOY_P)
    assert cham_verify(pub, 10, h)


def test_mock_adapt_example(small):
    # r' = 3 + (10 - 20) * 5^-1 mod 101 with 5^-1 = 81, so 3 - 810 = -807 = 1 (mod 101).
    # Check of the relation: 10 + 5*3 = 25 = 20 + 5*1.
    assert pow(5, -1, 101) == 81
    r2 = adapt_randomness(5, 10, 20, 3, 101)
    assert r2 == (3 - 810) % 101 == 1
    assert (10 + 5 * 3) % 101 == (20 + 5 * r2) % 101
    pub = ChamPublic(small.g ** 5)
    h = cham_hash(pub, 10, r=3)
    assert cham_verify(pub, 20, ChamHash(h.b, r2))


def test_verify_rejects_other_message(mock, rng):
    _, pub = cham_keygen(mock, rng)
    h = cham_hash(pub, 77, rng)
    assert cham_verify(pub, 77, h)
    assert not cham_verify(pub, 78, h)


def test_hash_randomness_is_nonzero(mock):
    _, pub = cham_keygen(mock, random.Random(2))
    rng = random.Random(3)
    assert all(cham_hash(pub, 1, rng).r for _ in range(2000))


def test_identity_adapt(mock, rng):
    td, pub = cham_keygen(mock, rng)
    h = cham_hash(pub, 9, rng)
    assert cham_adapt(td, 9, 9, h, mock.q) == h.r


@settings(max_examples=200, deadline=None)
@given(st.integers(0, MOCK_Q - 1), st.integers(0, MOCK_Q - 1), st.integers(0, 2 ** 32))
def test_collision_and_involution(m, m2, seed):
    s = get_suite("mock")
    rng = random.Random(seed)
    td, pub = cham_keygen(s, rng)
    h = cham_hash(pub, m, rng)
    r2 = cham_adapt(td, m, m2, h, s.q)
    h2 = ChamHash(h.b, r2)
    assert cham_verify(pub, m, h) and cham_verify(pub, m2, h2)
    assert cham_adapt(td, m2, m, h2, s.q) == h.r


def test_production_collision(production):
    rng = random.Random(5)
    td, pub = cham_keygen(production, rng)
    h = cham_hash(pub, 123, rng)
    r2 = cham_adapt(td, 123, 456, h, production.q)
    assert cham_verify(pub, 456, ChamHash(h.b, r2))


def test_trapdoor_wipe():
    td = ChamTrapdoor(bytes(range(32)))
    with td:
        assert td.R[5] == 5
    assert td.R == bytes(32)
    assert "secret" in repr(td)
    with pytest.raises(ChameleonError):
        ChamTrapdoor(b"short")
