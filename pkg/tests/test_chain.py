import hashlib
import random
import struct
from dataclasses import replace

import pytest

from chainrewrite.abet import abet_keygen, abet_setup
from chainrewrite.chain import (
    Chain,
    DataTx,
    GrantTx,
    NotMutable,
    TranscriptTx,
    chain_ok,
    leading_zero_bits,
    load_chain,
    merkle_leaf,
    merkle_root,
    mine_block,
    rewrite_in_place,
    save_chain,
    validate_chain,
)
from chainrewrite.codec import encode_transcript
from chainrewrite.dpss import Committee, CommitteeConfig, GrantEvent
from chainrewrite.kzg import kzg_setup
from chainrewrite.rewrite import fw_adapt, fw_hash
from chainrewrite.sigma import sig_keygen


@pytest.fixture
def setting(mock):
    rng = random.Random(50)
    master = abet_setup(mock, 3, rng)
    author, modifier = sig_keygen(mock, rng), sig_keygen(mock, rng)
    key = abet_keygen(master, "A", master.mpk.index(1), rng)
    return master, author, modifier, key, rng


def build(mock, master, author, rng, blocks=3, per_block=6, difficulty=4):
    chain = Chain.create(mock, difficulty, rng)
    for b in range(blocks):
        txs = []
        for i in range(per_block):
            if i % 2:
                txs.append(DataTx(f"data {b}.{i}".encode()))
            else:
                txs.append(fw_hash(master.mpk, author, f"doc {b}.{i}".encode(), ["A"], master.mpk.index(1), rng))
        mine_block(chain, txs, rng)
    return chain


def test_leaf_rules(setting):
    master, author, modifier, key, rng = setting
    tx = fw_hash(master.mpk, author, b"x", ["A"], master.mpk.index(1), rng)
    tx2 = fw_adapt(master.mpk, key, modifier, tx, b"y", rng)
    other = fw_hash(master.mpk, author, b"x", ["A"], master.mpk.index(1), rng)
    assert merkle_leaf(tx) == merkle_leaf(tx2) == hashlib.sha256(b"\x01" + bytes(tx.pk_ch) + bytes(tx.b)).digest()
    assert merkle_leaf(tx) != merkle_leaf(other)
    assert merkle_leaf(DataTx(b"a")) != merkle_leaf(DataTx(b"b"))


def test_merkle_root_shape():
    a, b, c = (hashlib.sha256(x).digest() for x in (b"a", b"b", b"c"))
    node = lambda x, y: hashlib.sha256(b"\x02" + x + y).digest()
    assert merkle_root([a]) == a
    assert merkle_root([a, b]) == node(a, b)
    assert merkle_root([a, b, c]) == node(node(a, b), node(c, c))


def test_pow_difficulty(mock):
    rng = random.Random(1)
    chain = Chain.create(mock, 0, rng)
    start = random.Random(2).getrandbits(32)
    blk = mine_block(chain, [DataTx(b"p")], random.Random(2))
    assert blk.nonce == start
    chain = Chain.create(mock, 12, rng)
    blk = mine_block(chain, [DataTx(b"p")], rng)
    assert int.from_bytes(blk.hash(), "big") >> (256 - 12) == 0
    assert leading_zero_bits(blk.hash()) >= 12


def test_mining_is_deterministic(mock):
    def nonce_search(height, prev, root, difficulty, start):
        n = start
        while True:
            h = hashlib.sha256(struct.pack(">I32s32sIQ", height, prev, root, difficulty, n)).digest()
            if int.from_bytes(h, "big") >> (256 - difficulty) == 0:
                return n
            n += 1

    blocks = []
    for _ in range(2):
        chain = Chain.create(mock, 10, random.Random(3))
        blocks.append(mine_block(chain, [DataTx(b"q")], random.Random(4)))
    assert blocks[0].nonce == blocks[1].nonce
    b = blocks[0]
    assert b.nonce == nonce_search(b.height, b.prev_hash, b.merkle_root, 10, random.Random(4).getrandbits(32))


def test_validate_and_rewrite(mock, setting):
    master, author, modifier, key, rng = setting
    chain = build(mock, master, author, rng)
    assert chain_ok(validate_chain(chain, master.mpk))
    hashes = [b.hash() for b in chain.blocks]
    roots = [b.merkle_root for b in chain.blocks]
    old, new = rewrite_in_place(chain, (2, 0), master.mpk, key, modifier, b"rewritten", rng)
    assert chain.tx_at((2, 0)) is new and new.content == b"rewritten"
    _, newer = rewrite_in_place(chain, (2, 0), master.mpk, key, modifier, b"again", rng)
    reports = validate_chain(chain, master.mpk)
    assert chain_ok(reports) and [r.height for r in reports] == list(range(4))
    assert [b.hash() for b in chain.blocks] == hashes
    assert [b.merkle_root for b in chain.blocks] == roots


def test_rewrite_of_immutable_rejected(mock, setting):
    master, author, modifier, key, rng = setting
    chain = build(mock, master, author, rng, blocks=1)
    with pytest.raises(NotMutable):
        rewrite_in_place(chain, (1, 1), master.mpk, key, modifier, b"z", rng)
    _, params = kzg_setup(mock, 2, rng)
    c = Committee.bootstrap(params, CommitteeConfig(tuple("abc"), 1), {"alpha": 3}, rng)
    _, tr = c.handoff(CommitteeConfig(tuple("bcd"), 1), rng)
    mine_block(chain, [TranscriptTx(encode_transcript(tr.public()))], rng)
    with pytest.raises(NotMutable):
        rewrite_in_place(chain, (2, 0), master.mpk, key, modifier, b"z", rng)


def test_tampering_fails(mock, setting):
    master, author, modifier, key, rng = setting
    chain = build(mock, master, author, rng)
    tx = chain.blocks[1].txs[0]
    chain.blocks[1].txs[0] = replace(tx, b=tx.b * mock.g)
    reports = validate_chain(chain, master.mpk)
    assert not reports[1].ok and reports[2].ok
    chain = build(mock, master, author, rng)
    chain.blocks[2].txs[1] = DataTx(b"forged")
    assert "merkle root mismatch" in validate_chain(chain)[2].errors
    chain.blocks[1].nonce += 1
    assert not chain_ok(validate_chain(chain))


def test_parallel_validation_same_report(mock, setting):
    from concurrent.futures import ThreadPoolExecutor
    master, author, _, _, rng = setting
    chain = build(mock, master, author, rng)
    seq = validate_chain(chain, master.mpk)
    par = validate_chain(chain, master.mpk, ThreadPoolExecutor(4))
    assert [(r.height, r.ok, r.errors) for r in seq] == [(r.height, r.ok, r.errors) for r in par]


def test_save_load_round_trip(tmp_path, mock, setting):
    master, author, modifier, key, rng = setting
    chain = build(mock, master, author, rng)
    mine_block(chain, [GrantTx(GrantEvent(1, 2, ("a", "b"), "A", "alice", "ff"))], rng)
    save_chain(chain, tmp_path / "c")
    back = load_chain(tmp_path / "c", mock)
    assert [b.hash() for b in back.blocks] == [b.hash() for b in chain.blocks]
    assert back.grants() == chain.grants()
    assert chain_ok(validate_chain(back, master.mpk))
    rewrite_in_place(back, (1, 0), master.mpk, key, modifier, b"persisted", rng)
    save_chain(back, tmp_path / "c")
    again = load_chain(tmp_path / "c", mock)
    assert again.tx_at((1, 0)).content == b"persisted"
    assert chain_ok(validate_chain(again, master.mpk))
