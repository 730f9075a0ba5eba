"""A small proof-of-work chain whose Merkle leaves commit to chameleon hashes.

Mutable transactions contribute ``SHA-256(pk_ch || b)`` as their leaf, so
rewriting one leaves every header untouched. Other transactions are
committed in full.
"""

from __future__ import annotations

import hashlib
import os
import struct
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Iterable, Optional, Union

from . import codec
from .algebra.groups import PairingSuite, default_rng
from .rewrite import MutableTx, fw_adapt, fw_verify

HEADER = struct.Struct(">I32s32sIQ")  # height, prev, root, difficulty, nonce
ZERO_HASH = bytes(32)


class ChainError(Exception):
    pass


class NotMutable(ChainError):
    pass


@dataclass(frozen=True)
class DataTx:
    payload: bytes


@dataclass(frozen=True)
class TranscriptTx:
    data: bytes  # encoded public handoff transcript


@dataclass(frozen=True)
class GrantTx:
    event: object  # GrantEvent


Tx = Union[MutableTx, DataTx, TranscriptTx, GrantTx]


def encode_tx(tx: Tx) -> bytes:
    if isinstance(tx, MutableTx):
        return codec.encode_mutable_tx(tx)
    if isinstance(tx, DataTx):
        return codec.Writer(codec.Record.DATA_TX).raw(tx.payload).finish()
    if isinstance(tx, TranscriptTx):
        return tx.data
    if isinstance(tx, GrantTx):
        return codec.encode_grant(tx.event)
    raise TypeError(f"not a transaction: {type(tx).__name__}")


def decode_tx(data: bytes, suite: PairingSuite) -> Tx:
    rec = codec.record_type(data)
    if rec == codec.Record.MUTABLE_TX:
        return codec.decode_mutable_tx(data, suite)
    if rec == codec.Record.DATA_TX:
        r = codec.Reader(data, suite, rec)
        tx = DataTx(r.raw())
        r.done()
        return tx
    if rec == codec.Record.TRANSCRIPT_TX:
        codec.decode_transcript(data, suite)  # structural check
        return TranscriptTx(bytes(data))
    if rec == codec.Record.GRANT_TX:
        return GrantTx(codec.decode_grant(data))
    raise codec.CodecError(f"record {rec.name} is not a transaction")


def merkle_leaf(tx: Tx) -> bytes:
    if isinstance(tx, MutableTx):
        return hashlib.sha256(b"\x01" + bytes(tx.pk_ch) + bytes(tx.b)).digest()
    return hashlib.sha256(b"\x00" + encode_tx(tx)).digest()


def merkle_root(leaves: Iterable[bytes]) -> bytes:
    level = list(leaves)
    if not level:
        return hashlib.sha256(b"").digest()
    while len(level) > 1:
        if len(level) % 2:
            level.append(level[-1])
        level = [hashlib.sha256(b"\x02" + level[i] + level[i + 1]).digest() for i in range(0, len(level), 2)]
    return level[0]


def leading_zero_bits(digest: bytes) -> int:
    n = int.from_bytes(digest, "big")
    return len(digest) * 8 - n.bit_length()


@dataclass
class Block:
    height: int
    prev_hash: bytes
    merkle_root: bytes
    difficulty: int
    nonce: int
    txs: list = dc_field(default_factory=list)

    def header(self) -> bytes:
        return HEADER.pack(self.height, self.prev_hash, self.merkle_root, self.difficulty, self.nonce)

    def hash(self) -> bytes:
        return hashlib.sha256(self.header()).digest()


def _pow(height, prev, root, difficulty, rng) -> int:
    nonce = rng.getrandbits(32)
    while True:
        h = hashlib.sha256(HEADER.pack(height, prev, root, difficulty, nonce)).digest()
        if leading_zero_bits(h) >= difficulty:
            return nonce
        nonce = (nonce + 1) % (1 << 64)


@dataclass
class BlockReport:
    height: int
    ok: bool
    millis: float
    errors: list


class Chain:
    def __init__(self, suite: PairingSuite, difficulty: int = 8, blocks: Optional[list] = None):
        self.suite = suite
        self.difficulty = difficulty
        self.blocks: list[Block] = blocks if blocks is not None else []

    @classmethod
    def create(cls, suite: PairingSuite, difficulty: int = 8, rng=None) -> "Chain":
        chain = cls(suite, difficulty)
        root = merkle_root([])
        nonce = _pow(0, ZERO_HASH, root, difficulty, default_rng(rng))
        chain.blocks.append(Block(0, ZERO_HASH, root, difficulty, nonce))
        return chain

    @property
    def height(self) -> int:
        return len(self.blocks) - 1

    def tip(self) -> Block:
        return self.blocks[-1]

    def tx_at(self, locator) -> Tx:
        height, idx = locator
        try:
            return self.blocks[height].txs[idx]
        except IndexError:
            raise ChainError(f"no transaction at {height}:{idx}") from None

    def transactions(self):
        for b in self.blocks:
            for i, tx in enumerate(b.txs):
                yield (b.height, i), tx

    def grants(self) -> list:
        return [tx.event for _, tx in self.transactions() if isinstance(tx, GrantTx)]


def mine_block(chain: Chain, txs: Iterable[Tx], rng=None, difficulty: Optional[int] = None) -> Block:
    txs = list(txs)
    d = chain.difficulty if difficulty is None else difficulty
    prev = chain.tip().hash()
    root = merkle_root(merkle_leaf(t) for t in txs)
    height = chain.height + 1
    block = Block(height, prev, root, d, _pow(height, prev, root, d, default_rng(rng)), txs)
    chain.blocks.append(block)
    return block


def _check_tx(tx: Tx, mpk) -> Optional[str]:
    if isinstance(tx, MutableTx):
        return None if fw_verify(mpk, tx) else "mutable transaction fails verification"
    if isinstance(tx, (DataTx, TranscriptTx, GrantTx)):
        return None
    return "unknown transaction type"


def validate_block(chain: Chain, height: int, mpk=None) -> BlockReport:
    start = time.perf_counter()
    b = chain.blocks[height]
    errors = []
    prev = ZERO_HASH if height == 0 else chain.blocks[height - 1].hash()
    if b.height != height:
        errors.append("height mismatch")
    if b.prev_hash != prev:
        errors.append("broken hash link")
    if b.difficulty != chain.difficulty or leading_zero_bits(b.hash()) < b.difficulty:
        errors.append("insufficient proof of work")
    if merkle_root(merkle_leaf(t) for t in b.txs) != b.merkle_root:
        errors.append("merkle root mismatch")
    for i, tx in enumerate(b.txs):
        err = _check_tx(tx, mpk)
        if err:
            errors.append(f"tx {i}: {err}")
    return BlockReport(height, not errors, (time.perf_counter() - start) * 1000.0, errors)


def validate_chain(chain: Chain, mpk=None, executor=None) -> list[BlockReport]:
    """One report per block, in height order."""
    heights = range(len(chain.blocks))
    if executor is None:
        return [validate_block(chain, h, mpk) for h in heights]
    return list(executor.map(lambda h: validate_block(chain, h, mpk), heights))


def chain_ok(reports: Iterable[BlockReport]) -> bool:
    return all(r.ok for r in reports)


def rewrite_in_place(chain: Chain, locator, mpk, key, modifier, content: bytes, rng=None, **adapt_kw):
    """Swap the mutable transaction at ``locator`` for its rewrite.

    Returns ``(old, new)``; headers and Merkle roots are untouched.
    """
    tx = chain.tx_at(locator)
    if not isinstance(tx, MutableTx):
        raise NotMutable(f"transaction at {locator[0]}:{locator[1]} is not mutable")
    new = fw_adapt(mpk, key, modifier, tx, content, rng, **adapt_kw)
    chain.blocks[locator[0]].txs[locator[1]] = new
    return tx, new


# -- persistence --------------------------------------------------------------

def encode_block(b: Block) -> bytes:
    w = codec.Writer(codec.Record.BLOCK).uint(b.height).raw(b.prev_hash).raw(b.merkle_root)
    w.uint(b.difficulty).uint(b.nonce).uint(len(b.txs))
    for tx in b.txs:
        w.raw(encode_tx(tx))
    return w.finish()


def decode_block(data: bytes, suite: PairingSuite) -> Block:
    r = codec.Reader(data, suite, codec.Record.BLOCK)
    height, prev, root, d, nonce = r.uint(), r.raw(), r.raw(), r.uint(), r.uint()
    txs = [decode_tx(r.raw(), suite) for _ in range(r.uint())]
    r.done()
    return Block(height, prev, root, d, nonce, txs)


def save_chain(chain: Chain, path) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    meta = codec.Writer(codec.Record.CHAIN_META).text(chain.suite.name).uint(chain.difficulty).uint(len(chain.blocks))
    (path / "chain.meta").write_bytes(meta.finish())
    for b in chain.blocks:
        (path / f"block_{b.height:06d}.blk").write_bytes(encode_block(b))
    for stale in path.glob("block_*.blk"):
        if int(stale.stem.split("_")[1]) >= len(chain.blocks):
            os.remove(stale)


def load_chain(path, suite: PairingSuite) -> Chain:
    path = Path(path)
    r = codec.Reader((path / "chain.meta").read_bytes(), suite, codec.Record.CHAIN_META)
    name, difficulty, n = r.text(), r.uint(), r.uint()
    r.done()
    if name != suite.name:
        raise ChainError(f"chain was built for {name}, not {suite.name}")
    blocks = [decode_block((path / f"block_{h:06d}.blk").read_bytes(), suite) for h in range(n)]
    return Chain(suite, difficulty, blocks)
