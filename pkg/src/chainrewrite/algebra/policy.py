"""Monotone boolean policies and their monotone span programs.

Grammar (AND binds tighter than OR)::

    expr := term | expr "OR" term
    term := atom | term "AND" atom
    atom := label | "(" expr ")"

A policy compiles into a share-generating matrix with one row per leaf.
AND nodes extend the vector by one coordinate (left child gets ``v||1``,
right child ``0..0||-1``), OR nodes pass the vector through unchanged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from . import field


class PolicyError(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    label: str


@dataclass(frozen=True)
class Gate:
    op: str  # "AND" | "OR"
    left: "Node"
    right: "Node"


Node = Union[Leaf, Gate]

_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolicyError(f"unexpected input at {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def parse_policy(text: str) -> Node:
    tokens = _tokenize(text)
    if not tokens:
        raise PolicyError("empty policy")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        node = term()
        while peek() == "OR":
            take()
            node = Gate("OR", node, term())
        return node

    def term():
        node = atom()
        while peek() == "AND":
            take()
            node = Gate("AND", node, atom())
        return node

    def atom():
        tok = take()
        if tok is None:
            raise PolicyError("unexpected end of policy")
        if tok == "(":
            node = expr()
            if take() != ")":
                raise PolicyError("missing ')'")
            return node
        if tok in (")", "AND", "OR"):
            raise PolicyError(f"unexpected token {tok!r}")
        return Leaf(tok)

    node = expr()
    if pos != len(tokens):
        raise PolicyError(f"trailing token {tokens[pos]!r}")
    return node


def as_node(policy: Union[str, Node]) -> Node:
    return parse_policy(policy) if isinstance(policy, str) else policy


def policy_text(node: Node) -> str:
    if isinstance(node, Leaf):
        return node.label
    return f"({policy_text(node.left)} {node.op} {policy_text(node.right)})"


def leaves(node: Node) -> list[str]:
    if isinstance(node, Leaf):
        return [node.label]
    return leaves(node.left) + leaves(node.right)


def evaluate(node: Node, attrs: Iterable[str]) -> bool:
    attrs = set(attrs)

    def ev(n):
        if isinstance(n, Leaf):
            return n.label in attrs
        if n.op == "AND":
            return ev(n.left) and ev(n.right)
        return ev(n.left) or ev(n.right)

    return ev(node)


def attribute_set(labels: Iterable[str]) -> frozenset:
    labels = list(labels)
    if not labels:
        raise PolicyError("attribute set must be nonempty")
    if len(set(labels)) != len(labels):
        raise PolicyError("duplicate attribute label")
    return frozenset(labels)


def attribute_scalar(label: str, q: int) -> int:
    return field.hash_to_scalar(label.encode("utf-8"), q)


# -- span programs ------------------------------------------------------------

@dataclass(frozen=True)
class MSP:
    rows: tuple  # tuple of equal-length tuples over Z_q
    labels: tuple  # labels[i] is the attribute of row i
    q: int
    tree: Node

    @property
    def width(self) -> int:
        return len(self.rows[0])

    def __len__(self) -> int:
        return len(self.rows)


def policy_to_msp(policy: Union[str, Node], q: int) -> MSP:
    node = as_node(policy)
    out: list[tuple[list[int], str]] = []
    width = 1

    def walk(n, vec):
        nonlocal width
        if isinstance(n, Leaf):
            out.append((vec, n.label))
        elif n.op == "OR":
            walk(n.left, vec)
            walk(n.right, vec)
        elif n.op == "AND":
            pad = vec + [0] * (width - len(vec))
            width += 1
            right = [0] * (width - 1) + [q - 1]
            walk(n.left, pad + [1])
            walk(n.right, right)
        else:
            raise PolicyError(f"unknown gate {n.op!r}")

    walk(node, [1])
    rows = tuple(tuple(v + [0] * (width - len(v))) for v, _ in out)
    return MSP(rows=rows, labels=tuple(lbl for _, lbl in out), q=q, tree=node)


def lss_share(msp: MSP, s: int, rng) -> list[tuple[int, int]]:
    """Shares ``(row, lambda_row)`` of ``s`` under ``msp``."""
    q = msp.q
    nu = [s % q] + [rng.randrange(q) for _ in range(msp.width - 1)]
    return [(i, sum(a * b for a, b in zip(row, nu)) % q) for i, row in enumerate(msp.rows)]


def reconstruct(shares: dict, coeffs: dict, q: int) -> int:
    return sum(coeffs[i] * shares[i] for i in coeffs) % q


def solve_span(rows: Sequence[Sequence[int]], target: Sequence[int], q: int) -> Optional[list[int]]:
    """Find ``c`` with ``sum(c_i * rows[i]) == target`` over Z_q, or None."""
    n, m = len(rows), len(target)
    if n == 0:
        return None if any(t % q for t in target) else []
    # columns of the augmented system: unknowns c_0..c_{n-1}, one equation per coordinate
    aug = [[rows[i][j] % q for i in range(n)] + [target[j] % q] for j in range(m)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((k for k in range(r, m) if aug[k][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        f = field.inv(aug[r][col], q)
        aug[r] = [x * f % q for x in aug[r]]
        for k in range(m):
            if k != r and aug[k][col]:
                c = aug[k][col]
                aug[k] = [(x - c * y) % q for x, y in zip(aug[k], aug[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if any(aug[k][n] for k in range(r, m)):
        return None
    sol = [0] * n
    for k, col in enumerate(pivots):
        sol[col] = aug[k][n]
    return sol


def _tree_pick(node: Node, attrs: set) -> Optional[list[int]]:
    """Leaf indices of a small satisfying subtree, numbered as in policy_to_msp."""
    counter = [0]

    def pick(n):
        if isinstance(n, Leaf):
            i = counter[0]
            counter[0] += 1
            return [i] if n.label in attrs else None
        a = pick(n.left)
        b = pick(n.right)
        if n.op == "AND":
            return a + b if a is not None and b is not None else None
        if a is None:
            return b
        if b is None:
            return a
        return a if len(a) <= len(b) else b

    return pick(node)


def msp_satisfy(msp: MSP, attrs: Iterable[str]) -> Optional[dict]:
    """Reconstruction coefficients ``{row: gamma}`` for ``attrs``, or None."""
    attrs = set(attrs)
    q = msp.q
    target = [1] + [0] * (msp.width - 1)
    picked = _tree_pick(msp.tree, attrs)
    if picked is not None:
        total = [sum(msp.rows[i][j] for i in picked) % q for j in range(msp.width)]
        if total == target:
            return {i: 1 for i in picked}
    return msp_satisfy_elimination(msp, attrs)


def msp_satisfy_elimination(msp: MSP, attrs: Iterable[str]) -> Optional[dict]:
    """Generic solver over every row whose label is in ``attrs``."""
    attrs = set(attrs)
    idx = [i for i, lbl in enumerate(msp.labels) if lbl in attrs]
    target = [1] + [0] * (msp.width - 1)
    sol = solve_span([msp.rows[i] for i in idx], target, msp.q)
    if sol is None:
        return None
    return {i: c for i, c in zip(idx, sol) if c}
