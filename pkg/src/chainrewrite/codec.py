"""Versioned container format for everything that touches disk or the chain.

A container is ``b"CRW" | version | record-type`` followed by typed
fields, each ``tag (1 byte) | length (4 bytes, big-endian) | data``.
Nested records travel as BYTES fields. See docs/FORMATS.md.
"""

from __future__ import annotations

import struct
from collections import Counter
from enum import IntEnum
from typing import Iterable

from .algebra.groups import G, H, T, Element, PairingSuite
from .algebra.policy import parse_policy, policy_text, policy_to_msp

MAGIC = b"CRW"
VERSION = 1


class CodecError(ValueError):
    pass


class Tag(IntEnum):
    SCALAR = 1
    G = 2
    H = 3
    T = 4
    BYTES = 5
    TEXT = 6
    UINT = 7
    MASK = 8


class Record(IntEnum):
    MPK = 1
    MASTER = 2
    KZG = 3
    KEY = 4
    CIPHERTEXT = 5
    MUTABLE_TX = 6
    DATA_TX = 7
    TRANSCRIPT_TX = 8
    GRANT_TX = 9
    BLOCK = 10
    BLACKBOX = 11
    SIGKEY = 12
    COMMITTEE = 13
    CHAM_PART = 14
    ABET_PART = 15
    SIG_PART = 16
    CHAIN_META = 17
    BOARD = 18
    REWRITE_PAIR = 19


_GROUP_TAG = {G: Tag.G, H: Tag.H, T: Tag.T}


class Writer:
    def __init__(self, record: Record, suite: PairingSuite | None = None):
        self.record = record
        self.suite = suite
        self._parts: list[bytes] = []

    def _add(self, tag: Tag, data: bytes) -> "Writer":
        self._parts.append(struct.pack(">BI", tag, len(data)) + data)
        return self

    def scalar(self, v: int) -> "Writer":
        return self._add(Tag.SCALAR, self.suite.encode_scalar(v))

    def elem(self, e: Element) -> "Writer":
        return self._add(_GROUP_TAG[e.group], bytes(e))

    def elems(self, es: Iterable[Element]) -> "Writer":
        es = list(es)
        self.uint(len(es))
        for e in es:
            self.elem(e)
        return self

    def raw(self, data: bytes) -> "Writer":
        return self._add(Tag.BYTES, bytes(data))

    def mask(self, data: bytes) -> "Writer":
        return self._add(Tag.MASK, bytes(data))

    def text(self, s: str) -> "Writer":
        return self._add(Tag.TEXT, s.encode("utf-8"))

    def uint(self, n: int) -> "Writer":
        return self._add(Tag.UINT, int(n).to_bytes(8, "big"))

    def finish(self) -> bytes:
        return MAGIC + bytes([VERSION, self.record]) + b"".join(self._parts)


def parse_fields(data: bytes):
    """``(record, [(tag, payload), ...])`` without interpreting payloads."""
    if len(data) < 5 or data[:3] != MAGIC:
        raise CodecError("not a container")
    if data[3] != VERSION:
        raise CodecError(f"unsupported container version {data[3]}")
    try:
        record = Record(data[4])
    except ValueError:
        raise CodecError(f"unknown record type {data[4]}") from None
    fields, pos = [], 5
    while pos < len(data):
        if pos + 5 > len(data):
            raise CodecError("truncated field header")
        tag, n = struct.unpack_from(">BI", data, pos)
        pos += 5
        if pos + n > len(data):
            raise CodecError("truncated field")
        try:
            fields.append((Tag(tag), data[pos:pos + n]))
        except ValueError:
            raise CodecError(f"unknown field tag {tag}") from None
        pos += n
    return record, fields


def record_type(data: bytes) -> Record:
    return parse_fields(data)[0]


def field_counts(data: bytes) -> Counter:
    return Counter(tag for tag, _ in parse_fields(data)[1])


class Reader:
    def __init__(self, data: bytes, suite: PairingSuite | None = None, record: Record | None = None):
        self.record, self._fields = parse_fields(bytes(data))
        if record is not None and self.record != record:
            raise CodecError(f"expected {record.name}, got {self.record.name}")
        self.suite = suite
        self._pos = 0

    def _next(self, tag: Tag) -> bytes:
        if self._pos >= len(self._fields):
            raise CodecError(f"missing {tag.name} field")
        got, payload = self._fields[self._pos]
        if got != tag:
            raise CodecError(f"expected {tag.name}, found {got.name}")
        self._pos += 1
        return payload

    def scalar(self) -> int:
        return self.suite.decode_scalar(self._next(Tag.SCALAR))

    def elem(self, group: str) -> Element:
        try:
            return self.suite.decode(group, self._next(_GROUP_TAG[group]))
        except CodecError:
            raise
        except Exception as exc:
            raise CodecError(f"bad {group} element: {exc}") from exc

    def elems(self, group: str) -> list:
        return [self.elem(group) for _ in range(self.uint())]

    def raw(self) -> bytes:
        return self._next(Tag.BYTES)

    def mask(self) -> bytes:
        return self._next(Tag.MASK)

    def text(self) -> str:
        return self._next(Tag.TEXT).decode("utf-8")

    def uint(self) -> int:
        return int.from_bytes(self._next(Tag.UINT), "big")

    def done(self) -> None:
        if self._pos != len(self._fields):
            raise CodecError("trailing fields")


# -- ABET ---------------------------------------------------------------------

def encode_mpk(mpk) -> bytes:
    w = Writer(Record.MPK, mpk.suite).uint(mpk.k)
    for e in (mpk.g, mpk.h, mpk.u, mpk.v, mpk.w, mpk.egh_alpha, mpk.egh_theta):
        w.elem(e)
    w.elems(mpk.g_lvl).elems(mpk.h_lvl)
    for e in (mpk.g_beta, mpk.h_inv_alpha, mpk.h_beta_alpha):
        w.elem(e)
    return w.finish()


def decode_mpk(data: bytes, suite):
    from .abet import AbetPublic

    r = Reader(data, suite, Record.MPK)
    k = r.uint()
    g, h, u, v, w_ = r.elem(G), r.elem(H), r.elem(G), r.elem(G), r.elem(G)
    ea, et = r.elem(T), r.elem(T)
    g_lvl, h_lvl = tuple(r.elems(G)), tuple(r.elems(H))
    mpk = AbetPublic(k, g, h, u, v, w_, ea, et, g_lvl, h_lvl, r.elem(G), r.elem(H), r.elem(H))
    r.done()
    if len(g_lvl) != k or len(h_lvl) != k + 1:
        raise CodecError("level count does not match k")
    return mpk


def encode_master(master) -> bytes:
    w = Writer(Record.MASTER, master.mpk.suite)
    w.scalar(master.alpha).scalar(master.beta).scalar(master.theta).uint(len(master.z))
    for z in master.z:
        w.scalar(z)
    return w.raw(encode_mpk(master.mpk)).finish()


def decode_master(data: bytes, suite):
    from .abet import AbetMaster

    r = Reader(data, suite, Record.MASTER)
    a, b, t = r.scalar(), r.scalar(), r.scalar()
    z = tuple(r.scalar() for _ in range(r.uint()))
    mpk = decode_mpk(r.raw(), suite)
    r.done()
    return AbetMaster(a, b, t, z, mpk)


def encode_key(key) -> bytes:
    s = key.k1.suite
    w = Writer(Record.KEY, s).text(policy_text(key.msp.tree)).uint(len(key.rows))
    for row in key.rows:
        w.text(row.label).elem(row.k1).elem(row.k2).elem(row.k3)
    w.elem(key.k0a).elem(key.k0b).elem(key.k1).elems(key.deleg).elem(key.g_inv_alpha)
    w.uint(len(key.index))
    for i in key.index:
        w.scalar(i)
    return w.finish()


def decode_key(data: bytes, suite):
    from .abet import AbetSecretKey, KeyRow

    r = Reader(data, suite, Record.KEY)
    msp = policy_to_msp(parse_policy(r.text()), suite.q)
    rows = tuple(KeyRow(r.text(), r.elem(G), r.elem(G), r.elem(H)) for _ in range(r.uint()))
    if tuple(row.label for row in rows) != msp.labels:
        raise CodecError("key rows do not match the policy")
    k0a, k0b, k1 = r.elem(G), r.elem(G), r.elem(G)
    deleg = tuple(r.elems(G))
    gia = r.elem(G)
    index = tuple(r.scalar() for _ in range(r.uint()))
    r.done()
    return AbetSecretKey(msp, rows, k0a, k0b, k1, deleg, gia, index)


def _write_ct(w: Writer, ct) -> Writer:
    w.mask(ct.mask).uint(len(ct.attrs))
    for label, c1, c2 in ct.attrs:
        w.text(label).elem(c1).elem(c2)
    for e in ct.ct0:
        w.elem(e)
    return w.elem(ct.ct1)


def _read_ct(r: Reader):
    from .abet import AbetCiphertext

    mask = r.mask()
    attrs = tuple((r.text(), r.elem(H), r.elem(G)) for _ in range(r.uint()))
    ct0 = (r.elem(H), r.elem(H), r.elem(H))
    return AbetCiphertext(mask, attrs, ct0, r.elem(H))


def encode_ciphertext(ct) -> bytes:
    return _write_ct(Writer(Record.CIPHERTEXT, ct.ct1.suite), ct).finish()


def decode_ciphertext(data: bytes, suite):
    r = Reader(data, suite, Record.CIPHERTEXT)
    ct = _read_ct(r)
    r.done()
    return ct


def encode_blackbox(keys) -> bytes:
    keys = list(keys)
    w = Writer(Record.BLACKBOX).uint(len(keys))
    for k in keys:
        w.raw(encode_key(k))
    return w.finish()


def decode_blackbox(data: bytes, suite) -> list:
    r = Reader(data, suite, Record.BLACKBOX)
    keys = [decode_key(r.raw(), suite) for _ in range(r.uint())]
    r.done()
    return keys


# -- signatures, transactions ---------------------------------------------------

def encode_sigkey(kp) -> bytes:
    return Writer(Record.SIGKEY, kp.pk.suite).scalar(kp.sk).elem(kp.pk).finish()


def decode_sigkey(data: bytes, suite):
    from .sigma import SigKeypair

    r = Reader(data, suite, Record.SIGKEY)
    kp = SigKeypair(r.scalar(), r.elem(G))
    r.done()
    if suite.g ** kp.sk != kp.pk:
        raise CodecError("public key does not match secret key")
    return kp


def encode_cham_part(tx) -> bytes:
    """2 scalars (m, r) and 3 G elements (p', b, signer key)."""
    return Writer(Record.CHAM_PART, tx.b.suite).scalar(tx.m).scalar(tx.r).elem(tx.pk_ch).elem(tx.b).elem(tx.author).finish()


def encode_abet_part(tx) -> bytes:
    return _write_ct(Writer(Record.ABET_PART, tx.b.suite), tx.ct).finish()


def encode_sig_part(tx) -> bytes:
    return Writer(Record.SIG_PART, tx.b.suite).scalar(tx.sig.sigma).elem(tx.tag.c).elem(tx.sig.epk).finish()


def encode_mutable_tx(tx) -> bytes:
    w = Writer(Record.MUTABLE_TX)
    return w.raw(encode_cham_part(tx)).raw(encode_abet_part(tx)).raw(encode_sig_part(tx)).raw(tx.content).finish()


def decode_mutable_tx(data: bytes, suite):
    from .rewrite import MutableTx
    from .sigma import LinkTag, SchnorrSig

    r = Reader(data, suite, Record.MUTABLE_TX)
    cp = Reader(r.raw(), suite, Record.CHAM_PART)
    m, rr, pk_ch, b, author = cp.scalar(), cp.scalar(), cp.elem(G), cp.elem(G), cp.elem(G)
    cp.done()
    ap = Reader(r.raw(), suite, Record.ABET_PART)
    ct = _read_ct(ap)
    ap.done()
    sp = Reader(r.raw(), suite, Record.SIG_PART)
    sigma, c, epk = sp.scalar(), sp.elem(G), sp.elem(G)
    sp.done()
    content = r.raw()
    r.done()
    return MutableTx(pk_ch, m, b, rr, ct, LinkTag(c), SchnorrSig(epk, sigma), author, content)


def storage_breakdown(tx_bytes: bytes) -> dict:
    """Field counts of the three cryptographic parts of a mutable transaction."""
    r = Reader(tx_bytes, None, Record.MUTABLE_TX)
    parts = {}
    for name in ("chameleon", "abet", "signature"):
        c = field_counts(r.raw())
        parts[name] = {
            "Zq": c[Tag.SCALAR] + c[Tag.MASK],
            "G": c[Tag.G],
            "H": c[Tag.H],
            "T": c[Tag.T],
        }
    return parts


# -- committee artefacts --------------------------------------------------------

def encode_kzg(params) -> bytes:
    return Writer(Record.KZG, params.suite).elems(params.powers).elem(params.h).elem(params.h_alpha).finish()


def decode_kzg(data: bytes, suite):
    from .kzg import KzgParams

    r = Reader(data, suite, Record.KZG)
    p = KzgParams(tuple(r.elems(G)), r.elem(H), r.elem(H))
    r.done()
    return p


def _write_board(w: Writer, board) -> Writer:
    w.uint(board.t).elems(board.commits).uint(len(board.witnesses))
    for i in sorted(board.witnesses):
        w.uint(i).elems(board.witnesses[i])
    return w


def _read_board(r: Reader):
    from .dpss.sharing import ShareBoard

    t = r.uint()
    commits = tuple(r.elems(G))
    board = ShareBoard(t, commits)
    for _ in range(r.uint()):
        i = r.uint()
        board.witnesses[i] = tuple(r.elems(G))
    return board


def encode_committee(committee) -> bytes:
    """Full simulator state, including private shares (operator file)."""
    cfg = committee.cfg
    s = committee.params.suite
    w = Writer(Record.COMMITTEE, s).uint(cfg.t).uint(cfg.epoch).uint(cfg.depth).uint(cfg.n)
    for node in committee.ordered():
        w.text(str(node.member)).raw(repr(node.rng.getstate()).encode())
        w.uint(len(node.shares))
        for name in sorted(node.shares):
            w.text(name).uint(len(node.shares[name].coeffs))
            for c in node.shares[name].coeffs:
                w.scalar(c)
    w.uint(len(committee.boards))
    for name in sorted(committee.boards):
        _write_board(w.text(name), committee.boards[name])
    return w.raw(encode_kzg(committee.params)).finish()


def decode_committee(data: bytes, suite):
    import ast
    import random

    from .dpss.committee import Committee, Node
    from .dpss.sharing import CommitteeConfig, FullShare

    r = Reader(data, suite, Record.COMMITTEE)
    t, epoch, depth, n = r.uint(), r.uint(), r.uint(), r.uint()
    members, nodes = [], []
    for idx in range(1, n + 1):
        member = r.text()
        rng = random.Random()
        rng.setstate(ast.literal_eval(r.raw().decode()))
        shares = {}
        for _ in range(r.uint()):
            name = r.text()
            shares[name] = FullShare(idx, tuple(r.scalar() for _ in range(r.uint())))
        members.append(member)
        nodes.append(Node(member, idx, rng, shares))
    boards = {}
    for _ in range(r.uint()):
        name = r.text()
        boards[name] = _read_board(r)
    params = decode_kzg(r.raw(), suite)
    r.done()
    cfg = CommitteeConfig(tuple(members), t, epoch, depth)
    return Committee(cfg, params, {nd.member: nd for nd in nodes}, boards)


def encode_transcript(tr) -> bytes:
    """Public part of a handoff transcript (private openings are dropped)."""
    w = Writer(Record.TRANSCRIPT_TX)
    w.uint(tr.epoch).text(tr.path).uint(tr.t_old).uint(tr.t_new)
    w.uint(len(tr.old_members))
    for m in tr.old_members:
        w.text(str(m))
    w.uint(len(tr.new_members))
    for m in tr.new_members:
        w.text(str(m))
    w.uint(len(tr.reduce))
    for (name, i, j), wit in sorted(tr.reduce.items()):
        w.text(name).uint(i).uint(j).elem(wit)
    w.uint(len(tr.zero))
    for j, (commit, w0, ws) in sorted(tr.zero.items()):
        w.uint(j).elem(commit).elem(w0).uint(len(ws))
        for k in sorted(ws):
            w.uint(k).elem(ws[k])
    w.uint(len(tr.helpers))
    for k, (Z, E, wz) in sorted(tr.helpers.items()):
        w.uint(k).elem(Z).elem(E).elem(wz)
    w.uint(len(tr.dealers))
    for (name, i), post in sorted(tr.dealers.items()):
        w.text(name).uint(i).elem(post.E).elem(post.old_witness).elems(post.commits).elem(post.G0).elem(post.w0)
        w.uint(len(post.witnesses))
        for m in sorted(post.witnesses):
            w.uint(m).elems(post.witnesses[m])
    w.uint(len(tr.boards))
    for name in sorted(tr.boards):
        _write_board(w.text(name), tr.boards[name])
    return w.finish()


def decode_transcript(data: bytes, suite):
    from .dpss.committee import DealerPost, HandoffTranscript

    r = Reader(data, suite, Record.TRANSCRIPT_TX)
    epoch, path, t_old, t_new = r.uint(), r.text(), r.uint(), r.uint()
    old = tuple(r.text() for _ in range(r.uint()))
    new = tuple(r.text() for _ in range(r.uint()))
    tr = HandoffTranscript(epoch, old, new, t_old, t_new, path)
    for _ in range(r.uint()):
        name, i, j = r.text(), r.uint(), r.uint()
        tr.reduce[(name, i, j)] = r.elem(G)
    for _ in range(r.uint()):
        j, commit, w0 = r.uint(), r.elem(G), r.elem(G)
        ws = {}
        for _ in range(r.uint()):
            k = r.uint()
            ws[k] = r.elem(G)
        tr.zero[j] = (commit, w0, ws)
    for _ in range(r.uint()):
        k = r.uint()
        tr.helpers[k] = (r.elem(G), r.elem(G), r.elem(G))
    for _ in range(r.uint()):
        name, i = r.text(), r.uint()
        E, ow = r.elem(G), r.elem(G)
        commits = tuple(r.elems(G))
        G0, w0 = r.elem(G), r.elem(G)
        wits = {}
        for _ in range(r.uint()):
            m = r.uint()
            wits[m] = tuple(r.elems(G))
        tr.dealers[(name, i)] = DealerPost(E, ow, commits, G0, w0, wits)
    for _ in range(r.uint()):
        name = r.text()
        tr.boards[name] = _read_board(r)
    r.done()
    return tr


def encode_grant(ev) -> bytes:
    w = Writer(Record.GRANT_TX).uint(ev.epoch).uint(ev.depth).uint(len(ev.quorum))
    for m in ev.quorum:
        w.text(str(m))
    return w.text(ev.policy).text(ev.recipient).text(ev.key_id).finish()


def decode_grant(data: bytes):
    from .dpss.committee import GrantEvent

    r = Reader(data, None, Record.GRANT_TX)
    epoch, depth = r.uint(), r.uint()
    quorum = tuple(r.text() for _ in range(r.uint()))
    ev = GrantEvent(epoch, depth, quorum, r.text(), r.text(), r.text())
    r.done()
    return ev


def encode_rewrite_pair(before: bytes, after: bytes) -> bytes:
    return Writer(Record.REWRITE_PAIR).raw(before).raw(after).finish()


def decode_rewrite_pair(data: bytes) -> tuple:
    r = Reader(data, None, Record.REWRITE_PAIR)
    out = (r.raw(), r.raw())
    r.done()
    return out
