"""Schnorr signatures over a link tag derived from the chameleon trapdoor.

Each (re)write is signed on ``c = g^(sk + pad(R))``. Two tags made from the
same R differ by ``g^(sk' - sk)``, which is what lets a judge tie a
modified transaction back to the key that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra.groups import Element, PairingSuite, default_rng
from .chameleon import R_BYTES, ChamTrapdoor

PAD_BYTES = 32  # R || 0^256 gives a 512-bit padded string


@dataclass(frozen=True)
class SigKeypair:
    sk: int
    pk: Element


@dataclass(frozen=True)
class LinkTag:
    c: Element


@dataclass(frozen=True)
class SchnorrSig:
    epk: Element
    sigma: int


def padded(R: bytes) -> bytes:
    if len(R) != R_BYTES:
        raise ValueError("bad trapdoor length")
    return R + bytes(PAD_BYTES)


def pad_scalar(R: bytes, q: int) -> int:
    return int.from_bytes(padded(R), "big") % q


def sig_keypair(suite: PairingSuite, sk: int) -> SigKeypair:
    sk %= suite.q
    if not sk:
        raise ValueError("secret key must be nonzero")
    return SigKeypair(sk, suite.g ** sk)


def sig_keygen(suite: PairingSuite, rng=None) -> SigKeypair:
    return sig_keypair(suite, suite.random_scalar(default_rng(rng), nonzero=True))


def challenge(epk: Element, c: Element) -> int:
    return epk.suite.hash_to_scalar(bytes(epk) + bytes(c))


def schnorr_response(esk: int, sk: int, chal: int, q: int) -> int:
    return (esk + sk * chal) % q


def link_tag(kp: SigKeypair, td: ChamTrapdoor) -> LinkTag:
    s = kp.pk.suite
    return LinkTag(s.g ** ((kp.sk + pad_scalar(td.R, s.q)) % s.q))


def sig_sign(kp: SigKeypair, td: ChamTrapdoor, rng=None, esk: int | None = None):
    s = kp.pk.suite
    tag = link_tag(kp, td)
    if esk is None:
        esk = s.random_scalar(default_rng(rng), nonzero=True)
    epk = s.g ** esk
    sig = SchnorrSig(epk, schnorr_response(esk, kp.sk, challenge(epk, tag.c), s.q))
    return tag, sig


def sig_verify(pk: Element, tag: LinkTag, sig: SchnorrSig) -> bool:
    s = pk.suite
    if pk.is_identity():
        return False
    return s.g ** sig.sigma == sig.epk * pk ** challenge(sig.epk, tag.c)


def sig_link_delta(tag: LinkTag, tag_new: LinkTag) -> Element:
    return tag_new.c / tag.c


def tag_opens_to(pk: Element, tag: LinkTag, R: bytes) -> bool:
    """Whether ``tag`` was formed from the key behind ``pk`` and trapdoor R."""
    s = pk.suite
    return tag.c / s.g ** pad_scalar(R, s.q) == pk


def sig_shift(pk: Element, tag: LinkTag, sig: SchnorrSig, delta: int):
    """Move a valid signature to the key ``pk * g^delta``.

    The signed tag is left as is, so the result verifies on the same c.
    """
    s = pk.suite
    pk2 = pk * s.g ** delta
    sig2 = SchnorrSig(sig.epk, (sig.sigma + delta * challenge(sig.epk, tag.c)) % s.q)
    return pk2, sig2
