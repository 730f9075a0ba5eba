import itertools
import os
import random

import pytest

from chainrewrite import codec
from chainrewrite.abet import (
    AbetError,
    abet_dec,
    abet_dec_detail,
    abet_delegate,
    abet_enc,
    abet_keygen,
    abet_setup,
    index_value,
)
from chainrewrite.algebra import field
from chainrewrite.algebra.groups import MOCK_Q


@pytest.fixture
def master(mock):
    return abet_setup(mock, 3, random.Random(10))


def payload(rng):
    return rng.getrandbits(256).to_bytes(32, "big")


def test_setup_k1(mock):
    m = abet_setup(mock, 1, random.Random(0))
    assert len(m.mpk.g_lvl) == 1


def test_setup_pinned_exponents(mock):
    m = abet_setup(mock, 2, random.Random(0), alpha=2, beta=3, theta=5, z=[7, 9])
    assert m.mpk.g_lvl[0] == mock.g ** 14
    assert mock.dlog(m.mpk.egh_theta) == 5 * pow(2, -1, MOCK_Q) % MOCK_Q


def test_setup_pairing_cross_checks(mock):
    m = abet_setup(mock, 8, random.Random(1))
    p, s = m.mpk, mock
    for gl, hl in zip(p.g_lvl, p.h_lvl):
        assert s.pair(gl, p.h) == s.pair(p.g, hl)
    assert p.egh_theta == s.pair(p.g ** m.theta, p.h_inv_alpha)
    assert s.pair(p.g_beta, p.h_inv_alpha) == s.pair(p.g, p.h_beta_alpha)


def test_index_values_nonzero(mock):
    assert all(index_value(l, MOCK_Q) for l in range(1, 50))
    assert all(index_value(l, 2) for l in range(1, 20))


def test_key_exponent_oracle(mock, master):
    rng = random.Random(2)
    p = master.mpk
    for depth in (1, 2, 3):
        idx = p.index(depth)
        key = abet_keygen(master, "A AND B", idx, rng)
        t_star = mock.dlog(key.k0a) * master.alpha % MOCK_Q
        r_star = mock.dlog(key.k0b)
        zi = sum(z * I for z, I in zip(master.z, idx))
        expect = (master.theta + (master.alpha * zi + 1) * t_star + master.beta * r_star) % MOCK_Q
        assert mock.dlog(key.k1) == expect
        assert len(key.deleg) == 3 - depth
        for l, d in zip(range(depth, 3), key.deleg):
            assert mock.dlog(d) == master.alpha * master.z[l] * t_star % MOCK_Q


def test_key_rows_share_alpha(mock, master):
    key = abet_keygen(master, "(A AND B) OR C", master.mpk.index(1), random.Random(3))
    p = master.mpk
    w = mock.dlog(p.w)
    lam = {}
    for i, row in enumerate(key.rows):
        t = mock.dlog(row.k3)
        lam[i] = (mock.dlog(row.k1) - w * t) % MOCK_Q
    assert (lam[0] + lam[1]) % MOCK_Q == master.alpha
    assert lam[2] == master.alpha


def test_ciphertext_exponents(mock, master):
    rng = random.Random(4)
    ct = abet_enc(master.mpk, payload(rng), ["A"], master.mpk.index(2), rng)
    s = mock.dlog(ct.ct0[0])
    ia = pow(master.alpha, -1, MOCK_Q)
    assert mock.dlog(ct.ct0[1]) == s * ia % MOCK_Q
    assert mock.dlog(ct.ct0[2]) == master.beta * s * ia % MOCK_Q
    idx = master.mpk.index(2)
    jz = sum(z * I for z, I in zip(master.z, idx))
    assert mock.dlog(ct.ct1) == s * (master.alpha * jz + 1) % MOCK_Q


def test_round_trip_and_fresh_randomness(master):
    rng = random.Random(5)
    key = abet_keygen(master, "A", master.mpk.index(1), rng)
    R = payload(rng)
    c1 = abet_enc(master.mpk, R, ["A"], master.mpk.index(1), rng)
    c2 = abet_enc(master.mpk, R, ["A"], master.mpk.index(1), rng)
    assert abet_dec(master.mpk, c1, key) == R
    assert c1.ct0 != c2.ct0 and c1.mask != c2.mask


def test_unauthorized(master):
    rng = random.Random(6)
    key = abet_keygen(master, "A AND B", master.mpk.index(1), rng)
    ct = abet_enc(master.mpk, payload(rng), ["A"], master.mpk.index(1), rng)
    assert abet_dec(master.mpk, ct, key) is None


def test_cannot_decrypt_shallower(master):
    rng = random.Random(7)
    key = abet_keygen(master, "A", master.mpk.index(3), rng)
    ct = abet_enc(master.mpk, payload(rng), ["A"], master.mpk.index(1), rng)
    assert abet_dec(master.mpk, ct, key) is None


def test_decrypt_deeper_reports_depth(master):
    rng = random.Random(8)
    key = abet_keygen(master, "A", master.mpk.index(1), rng)
    R = payload(rng)
    ct = abet_enc(master.mpk, R, ["A"], master.mpk.index(3), rng)
    out = abet_dec_detail(master.mpk, ct, key)
    assert out[0] == R and out[1] == 3


def test_depth_bounds(master):
    with pytest.raises(AbetError):
        abet_keygen(master, "A", master.mpk.index(4), random.Random(0))
    with pytest.raises(AbetError):
        master.mpk.index(5)


def test_delegation(master):
    rng = random.Random(9)
    p = master.mpk
    key = abet_keygen(master, "A OR B", p.index(1), rng)
    d1 = abet_delegate(p, key, rng=rng)
    d2 = abet_delegate(p, d1, rng=rng)
    assert (d1.depth, d2.depth) == (2, 3)
    assert d1.k1 != key.k1 and d1.k0a != key.k0a  # re-randomized
    with pytest.raises(AbetError):
        abet_delegate(p, d2, rng=rng)
    R = payload(rng)
    deep = abet_enc(p, R, ["B"], p.index(3), rng)
    shallow = abet_enc(p, R, ["B"], p.index(1), rng)
    assert abet_dec(p, deep, d1) == R and abet_dec(p, deep, d2) == R
    assert abet_dec(p, shallow, d1) is None


def test_delegated_key_exponent_oracle(mock, master):
    rng = random.Random(11)
    p = master.mpk
    d = abet_delegate(p, abet_keygen(master, "A", p.index(1), rng), rng=rng)
    t_star = mock.dlog(d.k0a) * master.alpha % MOCK_Q
    zi = sum(z * I for z, I in zip(master.z, p.index(2)))
    expect = (master.theta + (master.alpha * zi + 1) * t_star + master.beta * mock.dlog(d.k0b)) % MOCK_Q
    assert mock.dlog(d.k1) == expect


def test_delegation_soundness_exhaustive(mock, master):
    """Keys (fresh or delegated) at every index vector of depth <= 3 over a two-value alphabet."""
    rng = random.Random(12)
    p = master.mpk
    sysvec = p.index(3)
    alphabet = lambda l: (sysvec[l], (sysvec[l] + 1) % MOCK_Q)
    vectors = [v for d in (1, 2, 3) for v in itertools.product(*(alphabet(l) for l in range(d)))]
    cts = {v: abet_enc(p, payload(rng), ["A"], v, rng) for v in vectors}
    for kv in vectors:
        keys = [abet_keygen(master, "A", kv, rng)]
        if len(kv) > 1:
            parent = abet_keygen(master, "A", kv[:-1], rng)
            keys.append(abet_delegate(p, parent, kv[-1], rng))
        for key in keys:
            for cv, ct in cts.items():
                # decryption walks down the system-wide vector only
                reachable = cv[:len(kv)] == kv and cv[len(kv):] == sysvec[len(kv):len(cv)]
                assert (abet_dec(p, ct, key) is not None) == reachable, (kv, cv)


def test_ciphertext_hides_index(mock, master):
    rng = random.Random(13)
    R = payload(rng)
    blobs = [codec.encode_ciphertext(abet_enc(master.mpk, R, ["A", "B"], master.mpk.index(d), rng))
             for d in range(0, 5)]
    assert len({len(b) for b in blobs}) == 1
    assert len({tuple(sorted(codec.field_counts(b).items())) for b in blobs}) == 1
    assert codec.Tag.SCALAR not in codec.field_counts(blobs[0])


def test_ciphertext_codec_round_trip(mock, master):
    rng = random.Random(14)
    ct = abet_enc(master.mpk, payload(rng), ["z", "a"], master.mpk.index(1), rng)
    assert ct.labels == ("a", "z")
    assert codec.decode_ciphertext(codec.encode_ciphertext(ct), mock) == ct


@pytest.mark.parametrize("profile", ["toy", "production"])
def test_round_trip_other_profiles(profile):
    from chainrewrite.algebra.groups import get_suite
    s = get_suite(profile)
    rng = random.Random(15)
    m = abet_setup(s, 3, rng)
    key = abet_keygen(m, "(A AND B) OR C", m.mpk.index(1), rng)
    R = payload(rng)
    assert abet_dec(m.mpk, abet_enc(m.mpk, R, ["A", "B"], m.mpk.index(2), rng), key) == R
    assert abet_dec(m.mpk, abet_enc(m.mpk, R, ["A"], m.mpk.index(2), rng), key) is None
