"""BLS12-381 backend.

G1/G2 arithmetic and the pairing itself come from ``py_arkworks_bls12381``.
That binding exposes target-group values only as opaque objects with no
exponentiation or decoding, so T elements are converted once into plain
tuples and handled by the small Fq12 tower below.

Tower: Fq2 = Fq[u]/(u^2 + 1), Fq6 = Fq2[v]/(v^3 - (u + 1)), Fq12 = Fq6[w]/(w^2 - v).
Serialized T elements are the 12 base-field coefficients, 48 bytes each,
little-endian, in the same order as the binding prints them.
"""

from __future__ import annotations

from typing import Iterable

from py_arkworks_bls12381 import G1Point, G2Point, GT, Scalar

from .groups import G, H, T, Element, PairingSuite

P = 0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB
Q = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001
FQ_BYTES = 48
GT_BYTES = 12 * FQ_BYTES


# -- Fq2 ---------------------------------------------------------------------

def _f2add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def _f2sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def _f2mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    return ((t0 - t1) % P, ((a0 + a1) * (b0 + b1) - t0 - t1) % P)


def _f2xi(a):
    # multiply by u + 1
    return ((a[0] - a[1]) % P, (a[0] + a[1]) % P)


def _f2neg(a):
    return (-a[0] % P, -a[1] % P)


# -- Fq6 ---------------------------------------------------------------------

def _f6add(a, b):
    return (_f2add(a[0], b[0]), _f2add(a[1], b[1]), _f2add(a[2], b[2]))


def _f6sub(a, b):
    return (_f2sub(a[0], b[0]), _f2sub(a[1], b[1]), _f2sub(a[2], b[2]))


def _f6mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    t0 = _f2mul(a0, b0)
    t1 = _f2mul(a1, b1)
    t2 = _f2mul(a2, b2)
    c0 = _f2add(t0, _f2xi(_f2sub(_f2mul(_f2add(a1, a2), _f2add(b1, b2)), _f2add(t1, t2))))
    c1 = _f2add(_f2sub(_f2mul(_f2add(a0, a1), _f2add(b0, b1)), _f2add(t0, t1)), _f2xi(t2))
    c2 = _f2add(_f2sub(_f2mul(_f2add(a0, a2), _f2add(b0, b2)), _f2add(t0, t2)), t1)
    return (c0, c1, c2)


def _f6v(a):
    # multiply by v
    return (_f2xi(a[2]), a[0], a[1])


def _f6neg(a):
    return (_f2neg(a[0]), _f2neg(a[1]), _f2neg(a[2]))


# -- Fq12 --------------------------------------------------------------------

_Z2 = (0, 0)
_Z6 = (_Z2, _Z2, _Z2)
ONE = (((1, 0), _Z2, _Z2), _Z6)


def f12mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = _f6mul(a0, b0)
    t1 = _f6mul(a1, b1)
    c0 = _f6add(t0, _f6v(t1))
    c1 = _f6sub(_f6mul(_f6add(a0, a1), _f6add(b0, b1)), _f6add(t0, t1))
    return (c0, c1)


def f12sqr(a):
    a0, a1 = a
    t = _f6mul(a0, a1)
    c0 = _f6sub(_f6sub(_f6mul(_f6add(a0, a1), _f6add(a0, _f6v(a1))), t), _f6v(t))
    return (c0, _f6add(t, t))


def f12conj(a):
    # equals the inverse on the order-Q subgroup
    return (a[0], _f6neg(a[1]))


def f12pow(a, k: int):
    if k == 0:
        return ONE
    # 4-bit fixed window
    table = [ONE, a]
    for _ in range(14):
        table.append(f12mul(table[-1], a))
    acc = ONE
    nib = []
    while k:
        nib.append(k & 15)
        k >>= 4
    first = True
    for d in reversed(nib):
        if not first:
            acc = f12sqr(f12sqr(f12sqr(f12sqr(acc))))
        if d:
            acc = f12mul(acc, table[d])
        first = False
    return acc


def f12_from_bytes(data: bytes):
    if len(data) != GT_BYTES:
        raise ValueError("bad target-group element length")
    xs = [int.from_bytes(data[FQ_BYTES * i:FQ_BYTES * (i + 1)], "little") for i in range(12)]
    if any(x >= P for x in xs):
        raise ValueError("coefficient out of range")
    f2 = [(xs[2 * i], xs[2 * i + 1]) for i in range(6)]
    return ((f2[0], f2[1], f2[2]), (f2[3], f2[4], f2[5]))


def f12_to_bytes(a) -> bytes:
    return b"".join(c.to_bytes(FQ_BYTES, "little") for f6 in a for f2 in f6 for c in f2)


def _from_gt(x) -> tuple:
    return f12_from_bytes(bytes.fromhex(str(x)))


class Bls12Suite(PairingSuite):
    name = "bls12-381"
    q = Q
    dlog_available = False

    def __init__(self):
        super().__init__()

    def _gen(self, group):
        if group == G:
            return G1Point()
        if group == H:
            return G2Point()
        return _from_gt(GT())

    def _id(self, group):
        if group == G:
            return G1Point.identity()
        if group == H:
            return G2Point.identity()
        return ONE

    def _op(self, group, a, b):
        return f12mul(a, b) if group == T else a + b

    def _inv(self, group, a):
        return f12conj(a) if group == T else -a

    def _exp(self, group, a, k):
        return f12pow(a, k) if group == T else a * Scalar(k)

    def _pair(self, a, b):
        return _from_gt(GT.pairing(a, b))

    def multi_pair(self, pairs: Iterable[tuple[Element, Element]]) -> Element:
        pairs = list(pairs)
        if not pairs:
            return self.identity(T)
        if any(a.group != G or b.group != H for a, b in pairs):
            raise TypeError("pairing expects (G, H) arguments")
        out = GT.multi_pairing([a.value for a, _ in pairs], [b.value for _, b in pairs])
        return Element(self, T, _from_gt(out))

    def multi_exp(self, bases, exps):
        if bases and bases[0].group in (G, H):
            cls = G1Point if bases[0].group == G else G2Point
            v = cls.multiexp_unchecked([b.value for b in bases], [Scalar(k % Q) for k in exps])
            return Element(self, bases[0].group, v)
        return super().multi_exp(bases, exps)

    def _encode(self, group, v):
        return f12_to_bytes(v) if group == T else bytes(v.to_compressed_bytes())

    def _decode(self, group, data):
        if group == G:
            return G1Point.from_compressed_bytes(data)
        if group == H:
            return G2Point.from_compressed_bytes(data)
        v = f12_from_bytes(data)
        # subgroup membership: v^Q == 1
        if f12pow(v, Q) != ONE:
            raise ValueError("not in the target group")
        return v
