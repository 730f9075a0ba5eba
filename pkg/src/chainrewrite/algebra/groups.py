"""Asymmetric pairing groups behind one small interface.

Every group element is an :class:`Element` written multiplicatively
(``a * b``, ``a / b``, ``a ** k``) and tagged with the group it lives in
(``"G"``, ``"H"`` or ``"T"``). A :class:`PairingSuite` supplies generators
``g`` in G and ``h`` in H, the map ``pair: G x H -> T`` and canonical
encodings.

Profiles:

``mock``
    Elements are stored as their discrete logarithm mod a small prime q
    (default 65521), so the pairing is just multiplication of exponents.
    Useless for security, ideal for brute-force oracles.
``toy``
    A prime-order subgroup of Z_p^* used for G, H and T, with the pairing
    computed through a discrete-log table. Still tiny q, but elements are
    real residues.
``production``
    BLS12-381 (see :mod:`chainrewrite.algebra.bls12`).
"""

from __future__ import annotations

import secrets
from functools import lru_cache
from typing import Any, Iterable, Sequence

from . import field

G, H, T = "G", "H", "T"
GROUPS = (G, H, T)

MOCK_Q = 65521
TOY_P = 7432339208719  # prime factor of 2^101 - 1, so 2 has order 101
TOY_Q = 101


def default_rng(rng=None):
    return rng if rng is not None else secrets.SystemRandom()


class Element:
    __slots__ = ("suite", "group", "value")

    def __init__(self, suite: "PairingSuite", group: str, value: Any):
        self.suite = suite
        self.group = group
        self.value = value

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise TypeError(f"cannot combine Element with {type(other).__name__}")
        if other.group != self.group or other.suite.name != self.suite.name:
            raise TypeError(f"group mismatch: {self.group}/{other.group}")

    def __mul__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.suite, self.group, self.suite._op(self.group, self.value, other.value))

    def __truediv__(self, other: "Element") -> "Element":
        self._check(other)
        s = self.suite
        return Element(s, self.group, s._op(self.group, self.value, s._inv(self.group, other.value)))

    def __pow__(self, k: int) -> "Element":
        return Element(self.suite, self.group, self.suite._exp(self.group, self.value, k % self.suite.q))

    def inverse(self) -> "Element":
        return Element(self.suite, self.group, self.suite._inv(self.group, self.value))

    def is_identity(self) -> bool:
        return self == self.suite.identity(self.group)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return (other.group == self.group and other.suite.name == self.suite.name
                and self.suite._eq(self.group, self.value, other.value))

    def __hash__(self) -> int:
        return hash((self.suite.name, self.group, bytes(self)))

    def __bytes__(self) -> bytes:
        return self.suite.encode(self)

    def __repr__(self) -> str:
        return f"Element({self.group}, {bytes(self).hex()[:16]}..)"


class PairingSuite:
    """Base class; backends fill in the underscore hooks."""

    name: str
    q: int

    def __init__(self) -> None:
        self.g = Element(self, G, self._gen(G))
        self.h = Element(self, H, self._gen(H))
        self.gt = self.pair(self.g, self.h)

    # -- public API ----------------------------------------------------------

    def identity(self, group: str) -> Element:
        return Element(self, group, self._id(group))

    def generator(self, group: str) -> Element:
        return {G: self.g, H: self.h, T: self.gt}[group]

    def pair(self, a: Element, b: Element) -> Element:
        if a.group != G or b.group != H:
            raise TypeError("pairing expects (G, H) arguments")
        return Element(self, T, self._pair(a.value, b.value))

    def multi_pair(self, pairs: Iterable[tuple[Element, Element]]) -> Element:
        acc = self.identity(T)
        for a, b in pairs:
            acc = acc * self.pair(a, b)
        return acc

    def random_scalar(self, rng=None, nonzero: bool = False) -> int:
        rng = default_rng(rng)
        while True:
            x = rng.randrange(self.q)
            if x or not nonzero:
                return x

    def random_element(self, group: str, rng=None) -> Element:
        return self.generator(group) ** self.random_scalar(rng, nonzero=True)

    def hash_to_scalar(self, data: bytes) -> int:
        return field.hash_to_scalar(data, self.q)

    @property
    def scalar_size(self) -> int:
        return field.scalar_bytes(self.q)

    def encode_scalar(self, a: int) -> bytes:
        return field.encode_scalar(a, self.q)

    def decode_scalar(self, data: bytes) -> int:
        return field.decode_scalar(data, self.q)

    def encode(self, e: Element) -> bytes:
        return self._encode(e.group, e.value)

    def decode(self, group: str, data: bytes) -> Element:
        return Element(self, group, self._decode(group, bytes(data)))

    def element_size(self, group: str) -> int:
        return len(self.encode(self.generator(group)))

    def multi_exp(self, bases: Sequence[Element], exps: Sequence[int]) -> Element:
        if not bases:
            raise ValueError("empty multi-exponentiation")
        acc = self.identity(bases[0].group)
        for b, k in zip(bases, exps):
            if k % self.q:
                acc = acc * b ** k
        return acc

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"

    # -- backend hooks --------------------------------------------------------

    def _eq(self, group, a, b) -> bool:
        return a == b


class MockSuite(PairingSuite):
    """Exponent-only groups: an element is its discrete log mod q."""

    dlog_available = True

    def __init__(self, q: int = MOCK_Q):
        self.q = q
        self.name = f"mock-{q}"
        self._width = field.scalar_bytes(q)
        super().__init__()

    def dlog(self, e: Element) -> int:
        return e.value

    def _gen(self, group):
        return 1

    def _id(self, group):
        return 0

    def _op(self, group, a, b):
        return (a + b) % self.q

    def _inv(self, group, a):
        return -a % self.q

    def _exp(self, group, a, k):
        return a * k % self.q

    def _pair(self, a, b):
        return a * b % self.q

    def _encode(self, group, v):
        return v.to_bytes(self._width, "big")

    def _decode(self, group, data):
        if len(data) != self._width:
            raise ValueError("bad element length")
        v = int.from_bytes(data, "big")
        if v >= self.q:
            raise ValueError("element out of range")
        return v


class ToySuite(PairingSuite):
    """Order-q subgroup of Z_p^* standing in for G, H and T.

    The pairing maps (g^a, g^b) to g^(ab) after a table lookup of both
    discrete logs, so q must stay small.
    """

    dlog_available = True

    def __init__(self, p: int = TOY_P, q: int = TOY_Q, g: int = 2):
        if pow(g, q, p) != 1 or g % p == 1:
            raise ValueError("g does not generate an order-q subgroup")
        if q > 1 << 20:
            raise ValueError("toy suite needs a table-sized q")
        self.p, self.q, self._g = p, q, g
        self.name = f"toy-{p}-{q}-{g}"
        self._width = (p.bit_length() + 7) // 8
        self._table = {}
        x = 1
        for i in range(q):
            self._table[x] = i
            x = x * g % p
        super().__init__()

    def dlog(self, e: Element) -> int:
        return self._table[e.value]

    def _gen(self, group):
        return self._g

    def _id(self, group):
        return 1

    def _op(self, group, a, b):
        return a * b % self.p

    def _inv(self, group, a):
        return pow(a, -1, self.p)

    def _exp(self, group, a, k):
        return pow(a, k, self.p)

    def _pair(self, a, b):
        return pow(self._g, self._table[a] * self._table[b] % self.q, self.p)

    def _encode(self, group, v):
        return v.to_bytes(self._width, "big")

    def _decode(self, group, data):
        v = int.from_bytes(data, "big")
        if v not in self._table:
            raise ValueError("not a subgroup element")
        return v


@lru_cache(maxsize=None)
def get_suite(profile: str = "mock", q: int | None = None) -> PairingSuite:
    """Shared suite instance for a profile name."""
    if profile == "mock":
        return MockSuite(q or MOCK_Q)
    if profile == "toy":
        return ToySuite()
    if profile == "production":
        from .bls12 import Bls12Suite
        return Bls12Suite()
    raise ValueError(f"unknown profile {profile!r}")
