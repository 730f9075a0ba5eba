"""Scalar-field helpers: hashing into Z_q and dense univariate polynomials.

Polynomials are plain lists of coefficients, lowest degree first, reduced
mod q. Nothing here knows about groups.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Sequence


def hash_to_scalar(data: bytes, q: int) -> int:
    # 512-bit digest keeps the reduction bias below 2^-250 for 255-bit q
    return int.from_bytes(hashlib.sha512(data).digest(), "big") % q


def inv(a: int, q: int) -> int:
    a %= q
    if a == 0:
        raise ZeroDivisionError("zero has no inverse mod q")
    return pow(a, -1, q)


def scalar_bytes(q: int) -> int:
    return (q.bit_length() + 7) // 8


def encode_scalar(a: int, q: int) -> bytes:
    return (a % q).to_bytes(scalar_bytes(q), "big")


def decode_scalar(data: bytes, q: int) -> int:
    a = int.from_bytes(data, "big")
    if a >= q:
        raise ValueError("scalar out of range")
    return a


# -- univariate polynomials -------------------------------------------------

def trim(poly: Sequence[int]) -> list[int]:
    out = list(poly)
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(poly: Sequence[int]) -> int:
    """Degree of ``poly``; the zero polynomial has degree -1."""
    return len(trim(poly)) - 1


def evaluate(poly: Sequence[int], x: int, q: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = (acc * x + c) % q
    return acc


def add(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q for i in range(n)]


def scale(a: Sequence[int], k: int, q: int) -> list[int]:
    return [(c * k) % q for c in a]


def random_poly(deg: int, q: int, rng, constant: int | None = None) -> list[int]:
    coeffs = [rng.randrange(q) for _ in range(deg + 1)]
    if constant is not None:
        coeffs[0] = constant % q
    return coeffs


def divide_by_linear(poly: Sequence[int], root: int, q: int) -> tuple[list[int], int]:
    """Synthetic division of ``poly`` by ``(x - root)``.

    Returns ``(quotient, remainder)`` where the remainder equals poly(root).
    """
    if not poly:
        return [], 0
    n = len(poly) - 1
    quotient = [0] * n
    carry = 0
    for k in range(n, 0, -1):
        carry = (poly[k] + carry * root) % q
        quotient[k - 1] = carry
    remainder = (poly[0] + carry * root) % q
    return quotient, remainder


def lagrange_coefficients(xs: Sequence[int], at: int, q: int) -> list[int]:
    """Weights L_i with sum(L_i * f(x_i)) == f(at) for deg f < len(xs)."""
    if len(set(x % q for x in xs)) != len(xs):
        raise ValueError("interpolation points must be distinct")
    out = []
    for i, xi in enumerate(xs):
        num, den = 1, 1
        for j, xj in enumerate(xs):
            if i != j:
                num = num * (at - xj) % q
                den = den * (xi - xj) % q
        out.append(num * inv(den, q) % q)
    return out


def interpolate_at(points: Iterable[tuple[int, int]], at: int, q: int) -> int:
    pts = list(points)
    weights = lagrange_coefficients([x for x, _ in pts], at, q)
    return sum(w * y for w, (_, y) in zip(weights, pts)) % q


def interpolate(points: Iterable[tuple[int, int]], q: int) -> list[int]:
    """Coefficients of the unique polynomial of degree < n through n points."""
    pts = list(points)
    xs = [x % q for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation points must be distinct")
    n = len(pts)
    # master polynomial prod (x - x_j), then divide out each root
    master = [1]
    for xj in xs:
        nxt = [0] * (len(master) + 1)
        for k, c in enumerate(master):
            nxt[k] = (nxt[k] - c * xj) % q
            nxt[k + 1] = (nxt[k + 1] + c) % q
        master = nxt
    result = [0] * n
    for i, (xi, yi) in enumerate(zip(xs, (y for _, y in pts))):
        basis, _ = divide_by_linear(master, xi, q)
        denom = evaluate(basis, xi, q)
        factor = yi * inv(denom, q) % q
        for k, c in enumerate(basis):
            result[k] = (result[k] + c * factor) % q
    return result
