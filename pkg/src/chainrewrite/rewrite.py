"""Policy-gated rewritable transactions and the public judge.

A mutable transaction is hashed with a fresh chameleon trapdoor R. R is
encrypted under the transaction's attribute set, and the author signs a
link tag derived from R. A modifier whose key decrypts R can open the same
chameleon hash to new content, re-encrypt R and sign again. The judge
links the two versions through the tags.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional, Sequence

from .abet import AbetCiphertext, AbetPublic, AbetSecretKey, abet_dec_detail, abet_enc, abet_trace
from .algebra import field
from .algebra.groups import Element, default_rng
from .chameleon import (
    ChamHash,
    ChamPublic,
    ChamTrapdoor,
    cham_adapt,
    cham_hash,
    cham_keygen,
    cham_public,
    cham_verify,
)
from .sigma import LinkTag, SchnorrSig, SigKeypair, sig_link_delta, sig_sign, sig_verify


class RewriteError(Exception):
    pass


class DecryptionDenied(RewriteError):
    pass


@dataclass(frozen=True)
class MutableTx:
    pk_ch: Element  # chameleon public key p'
    m: int  # content hash
    b: Element  # chameleon hash value
    r: int
    ct: AbetCiphertext  # encryption of R
    tag: LinkTag
    sig: SchnorrSig
    author: Element  # signer public key
    content: bytes

    @property
    def attrs(self) -> tuple:
        return self.ct.labels

    @property
    def cham(self) -> ChamHash:
        return ChamHash(self.b, self.r)


def content_scalar(content: bytes, q: int) -> int:
    return field.hash_to_scalar(content, q)


def fw_hash(mpk: AbetPublic, author: SigKeypair, content: bytes, attrs: Iterable[str], index: Sequence[int],
            rng=None) -> MutableTx:
    rng = default_rng(rng)
    s = mpk.suite
    td, pub = cham_keygen(s, rng)
    with td:
        m = content_scalar(content, s.q)
        h = cham_hash(pub, m, rng)
        ct = abet_enc(mpk, td.R, attrs, index, rng)
        tag, sig = sig_sign(author, td, rng)
    return MutableTx(pub.pk, m, h.b, h.r, ct, tag, sig, author.pk, bytes(content))


def fw_verify(mpk: Optional[AbetPublic], tx: MutableTx) -> bool:
    s = tx.b.suite
    if tx.m != content_scalar(tx.content, s.q):
        return False
    return cham_verify(ChamPublic(tx.pk_ch), tx.m, tx.cham) and sig_verify(tx.author, tx.tag, tx.sig)


def fw_adapt(mpk: AbetPublic, key: AbetSecretKey, modifier: SigKeypair, tx: MutableTx, content: bytes, rng=None,
             attrs: Optional[Iterable[str]] = None, index: Optional[Sequence[int]] = None,
             strict_attributes: bool = False) -> MutableTx:
    """Open ``tx`` to ``content`` under the same (pk_ch, b).

    The trapdoor is re-encrypted under ``attrs`` (default: unchanged) at
    ``index`` (default: the depth the old ciphertext opened at). With
    ``strict_attributes`` the attribute set may not change.
    """
    rng = default_rng(rng)
    if not fw_verify(mpk, tx):
        raise RewriteError("transaction does not verify")
    out = abet_dec_detail(mpk, tx.ct, key)
    if out is None:
        raise DecryptionDenied("key does not open this transaction")
    R, depth, _, _ = out
    s = mpk.suite
    with ChamTrapdoor(R) as td:
        if cham_public(s, td).pk != tx.pk_ch:
            raise RewriteError("decrypted trapdoor does not match the chameleon key")
        new_attrs = tuple(attrs) if attrs is not None else tx.attrs
        if strict_attributes and set(new_attrs) != set(tx.attrs):
            raise RewriteError("attribute set is owner-fixed")
        m2 = content_scalar(content, s.q)
        r2 = cham_adapt(td, tx.m, m2, tx.cham, s.q)
        ct = abet_enc(mpk, td.R, new_attrs, index if index is not None else mpk.index(depth), rng)
        tag, sig = sig_sign(modifier, td, rng)
    return replace(tx, m=m2, r=r2, ct=ct, tag=tag, sig=sig, author=modifier.pk, content=bytes(content))


def fw_judge_link(tx: MutableTx, tx2: MutableTx):
    """``(pk, pk', delta)`` when tx2 is a rewrite of tx by the key behind pk'."""
    if not (fw_verify(None, tx) and fw_verify(None, tx2)):
        return None
    if tx.pk_ch != tx2.pk_ch or tx.b != tx2.b:
        return None
    delta = sig_link_delta(tx.tag, tx2.tag)
    if tx2.author != tx.author * delta:
        return None
    return tx.author, tx2.author, delta


def fw_judge_trace(mpk: AbetPublic, blackbox: Callable, probes, grants=(), eps: float = 0.5, trials: int = 1,
                   rng=None):
    """Accused depths and the grant records issued at those depths."""
    accused = abet_trace(mpk, blackbox, probes, eps, trials, rng)
    records = [g for g in grants if g.depth in accused]
    return accused, records
