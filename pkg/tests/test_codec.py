import random

import pytest

from chainrewrite import codec
from chainrewrite.abet import abet_dec, abet_enc, abet_keygen, abet_setup
from chainrewrite.algebra.groups import get_suite
from chainrewrite.dpss import Committee, CommitteeConfig, GrantEvent, verify_transcript
from chainrewrite.kzg import kzg_setup
from chainrewrite.rewrite import fw_hash, fw_verify
from chainrewrite.sigma import sig_keygen


def mutable_tx(suite, n_attrs, seed=0):
    rng = random.Random(seed)
    master = abet_setup(suite, 3, rng)
    attrs = [f"attr{i}" for i in range(n_attrs)]
    return fw_hash(master.mpk, sig_keygen(suite, rng), b"body", attrs, master.mpk.index(1), rng)


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_storage_formula(mock, n):
    parts = codec.storage_breakdown(codec.encode_mutable_tx(mutable_tx(mock, n)))
    assert parts["chameleon"] == {"Zq": 2, "G": 3, "H": 0, "T": 0}
    assert parts["abet"] == {"Zq": 1, "G": n, "H": n + 4, "T": 0}
    assert parts["signature"] == {"Zq": 1, "G": 2, "H": 0, "T": 0}


@pytest.mark.parametrize("profile", ["mock", "toy", "production"])
def test_mutable_tx_round_trip(profile):
    s = get_suite(profile)
    tx = mutable_tx(s, 3, 1)
    back = codec.decode_mutable_tx(codec.encode_mutable_tx(tx), s)
    assert back == tx and fw_verify(None, back)


def test_production_byte_sizes(production):
    assert production.element_size("G") == 48
    assert production.element_size("H") == 96
    assert production.scalar_size == 32

    # cham part: 2 scalars, 3 G; each field costs a 5-byte header
    tx = mutable_tx(production, 2, 2)
    assert len(codec.encode_cham_part(tx)) == 5 + 2 * (5 + 32) + 3 * (5 + 48)


def test_rewrite_pair_round_trip():
    assert codec.decode_rewrite_pair(codec.encode_rewrite_pair(b"old", b"new")) == (b"old", b"new")


def test_key_mpk_master_round_trip(mock):
    rng = random.Random(3)
    master = abet_setup(mock, 4, rng)
    key = abet_keygen(master, "(a AND b) OR c", master.mpk.index(2), rng)
    mpk = codec.decode_mpk(codec.encode_mpk(master.mpk), mock)
    assert mpk == master.mpk
    assert codec.decode_master(codec.encode_master(master), mock) == master
    key2 = codec.decode_key(codec.encode_key(key), mock)
    R = bytes(range(32))
    assert abet_dec(mpk, abet_enc(mpk, R, ["c"], mpk.index(3), rng), key2) == R
    keys = codec.decode_blackbox(codec.encode_blackbox([key, key2]), mock)
    assert [k.k1 for k in keys] == [key.k1, key.k1]


def test_sigkey_round_trip_and_check(mock):
    kp = sig_keygen(mock, random.Random(4))
    assert codec.decode_sigkey(codec.encode_sigkey(kp), mock) == kp
    bad = codec.Writer(codec.Record.SIGKEY, mock).scalar(kp.sk).elem(kp.pk * mock.g).finish()
    with pytest.raises(codec.CodecError):
        codec.decode_sigkey(bad, mock)


def test_committee_and_transcript_round_trip(mock):
    rng = random.Random(5)
    _, params = kzg_setup(mock, 4, rng)
    assert codec.decode_kzg(codec.encode_kzg(params), mock) == params
    c = Committee.bootstrap(params, CommitteeConfig(tuple("abcde"), 1, depth=3), {"alpha": 8, "theta": 9}, rng)
    c_back = codec.decode_committee(codec.encode_committee(c), mock)
    assert c_back.cfg == c.cfg and c_back.open("alpha") == 8
    c2, tr = c_back.handoff(CommitteeConfig(tuple("cdefg"), 2), random.Random(6))
    tr_back = codec.decode_transcript(codec.encode_transcript(tr), mock)
    assert tr_back.values == {} and tr_back.helpers == tr.helpers
    assert verify_transcript(params, c.boards, tr_back)
    c3, tr3 = c2.handoff(CommitteeConfig(tuple("abc"), 1), random.Random(7))
    tr3_back = codec.decode_transcript(codec.encode_transcript(tr3), mock)
    assert tr3_back.path == "reshare" and verify_transcript(params, c2.boards, tr3_back)
    # the node rng state survives the file, so continuing from disk matches continuing in memory
    c_again = codec.decode_committee(codec.encode_committee(c), mock)
    assert all(c_again.nodes[m].rng.random() == c.nodes[m].rng.random() for m in c.cfg.members)


def test_grant_round_trip():
    ev = GrantEvent(3, 2, ("ann", "ben"), "(a OR b)", "alice", "00ff")
    assert codec.decode_grant(codec.encode_grant(ev)) == ev


@pytest.mark.parametrize("mutate", [
    lambda d: b"XYZ" + d[3:],
    lambda d: d[:3] + b"\x09" + d[4:],
    lambda d: d[:4] + b"\xee" + d[5:],
    lambda d: d[:-1],
    lambda d: d + b"\x05",
])
def test_malformed_containers(mock, mutate):
    data = codec.encode_mutable_tx(mutable_tx(mock, 1))
    with pytest.raises(codec.CodecError):
        codec.decode_mutable_tx(mutate(data), mock)


def test_wrong_record_and_bad_element(mock):
    data = codec.encode_grant(GrantEvent(0, 1, ("a",), "x", "y", "z"))
    with pytest.raises(codec.CodecError):
        codec.decode_mutable_tx(data, mock)
    bad = codec.Writer(codec.Record.SIGKEY, mock).scalar(1)._add(codec.Tag.G, b"\xff\xff").finish()
    with pytest.raises(codec.CodecError):
        codec.decode_sigkey(bad, mock)
