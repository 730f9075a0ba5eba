"""Discrete-log chameleon hash keyed by a short random string R.

The public key is ``p' = g^e`` with ``e = H(R)``; whoever knows R can open
a hash ``b = g^m p'^r`` to any other message.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import field
from .algebra.groups import Element, PairingSuite, default_rng

R_BYTES = 32


class ChameleonError(ValueError):
    pass


class ChamTrapdoor:
    """Holds R in a mutable buffer so it can be wiped after use."""

    __slots__ = ("_buf",)

    def __init__(self, R: bytes):
        if len(R) != R_BYTES:
            raise ChameleonError(f"trapdoor must be {R_BYTES} bytes")
        self._buf = bytearray(R)

    @property
    def R(self) -> bytes:
        return bytes(self._buf)

    def exponent(self, q: int) -> int:
        return field.hash_to_scalar(self.R, q)

    def wipe(self) -> None:
        for i in range(len(self._buf)):
            self._buf[i] = 0

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.wipe()

    def __eq__(self, other):
        return isinstance(other, ChamTrapdoor) and other._buf == self._buf

    def __repr__(self):
        return "ChamTrapdoor(<secret>)"


@dataclass(frozen=True)
class ChamPublic:
    pk: Element  # p' = g^H(R)


@dataclass(frozen=True)
class ChamHash:
    b: Element
    r: int


def cham_keygen(suite: PairingSuite, rng=None):
    rng = default_rng(rng)
    while True:
        R = rng.getrandbits(8 * R_BYTES).to_bytes(R_BYTES, "big")
        e = field.hash_to_scalar(R, suite.q)
        if e:
            return ChamTrapdoor(R), ChamPublic(suite.g ** e)


def cham_public(suite: PairingSuite, td: ChamTrapdoor) -> ChamPublic:
    e = td.exponent(suite.q)
    if not e:
        raise ChameleonError("trapdoor hashes to zero")
    return ChamPublic(suite.g ** e)


def cham_hash(pub: ChamPublic, m: int, rng=None, r: int | None = None) -> ChamHash:
    s = pub.pk.suite
    if r is None:
        r = s.random_scalar(default_rng(rng), nonzero=True)
    return ChamHash(s.g ** m * pub.pk ** r, r % s.q)


def cham_verify(pub: ChamPublic, m: int, h: ChamHash) -> bool:
    s = pub.pk.suite
    if pub.pk.is_identity():
        return False
    return h.b == s.g ** m * pub.pk ** h.r


def cham_adapt(td: ChamTrapdoor, m: int, m_new: int, h: ChamHash, q: int) -> int:
    """Randomness r' with g^m p'^r == g^m' p'^r'."""
    e = td.exponent(q)
    if not e:
        raise ChameleonError("trapdoor hashes to zero")
    return adapt_randomness(e, m, m_new, h.r, q)


def adapt_randomness(e: int, m: int, m_new: int, r: int, q: int) -> int:
    return (r + (m - m_new) * field.inv(e, q)) % q
