import random

import pytest
from hypothesis import given, settings, strategies as st

from chainrewrite.algebra.groups import MOCK_Q, MockSuite, get_suite
from chainrewrite.chameleon import ChamTrapdoor, cham_keygen
from chainrewrite.sigma import (
    LinkTag,
    SchnorrSig,
    challenge,
    link_tag,
    pad_scalar,
    padded,
    schnorr_response,
    sig_keygen,
    sig_keypair,
    sig_link_delta,
    sig_shift,
    sig_sign,
    sig_verify,
    tag_opens_to,
)


def test_keypair_examples(mock):
    with pytest.raises(ValueError):
        sig_keypair(mock, 0)
    assert mock.dlog(sig_keypair(mock, 7).pk) == 7
    assert sig_keygen(mock, random.Random(3)) == sig_keygen(mock, random.Random(3))


def test_padding_layout():
    R = bytes(range(32))
    assert padded(R) == R + bytes(32)
    assert pad_scalar(R, MOCK_Q) == (int.from_bytes(R, "big") << 256) % MOCK_Q


def test_response_arithmetic():
    assert schnorr_response(4, 3, 2, MOCK_Q) == 10


def test_sign_with_pinned_values(mock):
    kp = sig_keypair(mock, 3)
    td, _ = cham_keygen(mock, random.Random(0))
    tag, sig = sig_sign(kp, td, esk=4)
    chal = mock.hash_to_scalar(bytes(mock.g ** 4) + bytes(tag.c))
    assert sig.sigma == (4 + 3 * chal) % MOCK_Q
    assert mock.dlog(tag.c) == (3 + pad_scalar(td.R, MOCK_Q)) % MOCK_Q


def test_completeness_and_probes(mock, rng):
    kp = sig_keygen(mock, rng)
    td, _ = cham_keygen(mock, rng)
    tag, sig = sig_sign(kp, td, rng)
    assert sig_verify(kp.pk, tag, sig)
    assert not sig_verify(kp.pk, tag, SchnorrSig(sig.epk, (sig.sigma + 1) % MOCK_Q))
    _, sig2 = sig_sign(kp, td, rng)
    assert sig2.epk != sig.epk
    assert tag_opens_to(kp.pk, tag, td.R)


def test_other_tags_rejected_exhaustively():
    s = MockSuite(101)
    kp = sig_keypair(s, 17)
    td = ChamTrapdoor(bytes(range(1, 33)))
    tag, sig = sig_sign(kp, td, esk=29)
    chal = challenge(sig.epk, tag.c)
    for c in range(101):
        other = LinkTag(s.g ** c)
        # the only way another tag passes is a colliding challenge hash
        assert sig_verify(kp.pk, other, sig) == (challenge(sig.epk, other.c) == chal)
    accepted = [c for c in range(101) if sig_verify(kp.pk, LinkTag(s.g ** c), sig)]
    assert s.dlog(tag.c) in accepted and len(accepted) < 10


def test_link_delta(mock):
    td = ChamTrapdoor(bytes(range(32)))
    a, b = sig_keypair(mock, 3), sig_keypair(mock, 5)
    t1, t2 = link_tag(a, td), link_tag(b, td)
    assert sig_link_delta(t1, t2) == mock.g ** 2
    assert sig_link_delta(t1, t1).is_identity()
    assert b.pk == a.pk * sig_link_delta(t1, t2)


def test_link_fails_across_trapdoors(mock, rng):
    hits = 0
    for _ in range(200):
        a, b = sig_keygen(mock, rng), sig_keygen(mock, rng)
        td1, _ = cham_keygen(mock, rng)
        td2, _ = cham_keygen(mock, rng)
        hits += b.pk == a.pk * sig_link_delta(link_tag(a, td1), link_tag(b, td2))
    assert hits == 0


def test_shift_zero_is_identity(mock, rng):
    kp = sig_keygen(mock, rng)
    td, _ = cham_keygen(mock, rng)
    tag, sig = sig_sign(kp, td, rng)
    assert sig_shift(kp.pk, tag, sig, 0) == (kp.pk, sig)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, MOCK_Q - 1), st.integers(0, 2 ** 32))
def test_shift_then_verify(delta, seed):
    s = get_suite("mock")
    rng = random.Random(seed)
    kp = sig_keygen(s, rng)
    td, _ = cham_keygen(s, rng)
    tag, sig = sig_sign(kp, td, rng)
    pk2, sig2 = sig_shift(kp.pk, tag, sig, delta)
    assert pk2 == s.g ** (kp.sk + delta)
    assert sig_verify(pk2, tag, sig2)


def test_shifted_and_fresh_signatures_share_support():
    s = MockSuite(101)
    sk, delta = 11, 30
    td = ChamTrapdoor(bytes(range(32)))
    kp, kp2 = sig_keypair(s, sk), sig_keypair(s, sk + delta)
    tag = link_tag(kp, td)
    shifted = set()
    fresh = set()
    for esk in range(1, 101):
        epk = s.g ** esk
        sig = SchnorrSig(epk, schnorr_response(esk, sk, challenge(epk, tag.c), 101))
        shifted.add(sig_shift(kp.pk, tag, sig, delta)[1])
        fresh.add(SchnorrSig(epk, schnorr_response(esk, kp2.sk, challenge(epk, tag.c), 101)))
    assert shifted == fresh and len(fresh) == 100


def test_production_sign_verify(production):
    rng = random.Random(6)
    kp = sig_keygen(production, rng)
    td, _ = cham_keygen(production, rng)
    tag, sig = sig_sign(kp, td, rng)
    assert sig_verify(kp.pk, tag, sig)
    assert tag_opens_to(kp.pk, tag, td.R)
