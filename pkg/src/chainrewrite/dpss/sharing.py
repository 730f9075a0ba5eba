"""Bivariate sharing arithmetic and the public commitment board.

A secret s is embedded as f(0,0) of a polynomial with x-degree t and
y-degree 2t. Holder i keeps the full share f(i, y); the reduced share
f(x, j) is what a handoff helper reconstructs for point j.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from ..algebra import field
from ..algebra.groups import Element
from ..kzg import KzgParams, kzg_commit, kzg_create_witness


class DpssError(ValueError):
    pass


class HandoffError(DpssError):
    """Handoff aborted; ``member`` names the party blamed for it."""

    def __init__(self, member, reason: str):
        super().__init__(f"{reason} (accused: {member})")
        self.member = member
        self.reason = reason


@dataclass(frozen=True)
class CommitteeConfig:
    members: tuple
    t: int
    epoch: int = 0
    depth: int = 1

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))
        if self.t < 1:
            raise DpssError("threshold must be at least 1")
        if len(set(self.members)) != len(self.members):
            raise DpssError("duplicate member")
        if 2 * self.t + 1 > len(self.members):
            raise DpssError(f"need 2t+1 <= n, got t={self.t} n={len(self.members)}")

    @property
    def n(self) -> int:
        return len(self.members)

    def index_of(self, member) -> int:
        return self.members.index(member) + 1

    def member_at(self, index: int):
        return self.members[index - 1]


@dataclass(frozen=True)
class FullShare:
    index: int
    coeffs: tuple  # f(index, y), lowest degree first

    def at(self, y: int, q: int) -> int:
        return field.evaluate(self.coeffs, y, q)


@dataclass(frozen=True)
class ReducedShare:
    index: int
    coeffs: tuple  # f(x, index)


class Bivariate:
    """Coefficients a[x][y] with deg_x <= tx and deg_y <= ty."""

    def __init__(self, coeffs, q: int):
        self.a = [list(row) for row in coeffs]
        self.q = q

    @classmethod
    def random(cls, tx: int, ty: int, q: int, rng, constant: int = 0) -> "Bivariate":
        a = [[rng.randrange(q) for _ in range(ty + 1)] for _ in range(tx + 1)]
        a[0][0] = constant % q
        return cls(a, q)

    def at_x(self, x: int) -> list[int]:
        """Univariate in y: f(x, y)."""
        q = self.q
        out = [0] * len(self.a[0])
        p = 1
        for row in self.a:
            for k, c in enumerate(row):
                out[k] = (out[k] + c * p) % q
            p = p * x % q
        return out

    def at_y(self, y: int) -> list[int]:
        """Univariate in x: f(x, y)."""
        return [field.evaluate(row, y, self.q) for row in self.a]

    def __call__(self, x: int, y: int) -> int:
        return field.evaluate(self.at_x(x), y, self.q)


def points(t: int) -> range:
    """y-points 1..2t+1 at which reduced shares are committed."""
    return range(1, 2 * t + 2)


@dataclass
class ShareBoard:
    """Public commitments to f(x, j) plus per-holder opening witnesses."""

    t: int
    commits: tuple  # index j-1 -> commitment to f(x, j)
    witnesses: dict = dc_field(default_factory=dict)  # holder -> tuple over j

    def _weights(self, j: int, q: int) -> list[int]:
        return field.lagrange_coefficients(list(points(self.t)), j, q)

    def commitment_at(self, j: int) -> Element:
        if 1 <= j <= len(self.commits):
            return self.commits[j - 1]
        s = self.commits[0].suite
        return s.multi_exp(list(self.commits), self._weights(j, s.q))

    def witness_at(self, i: int, j: int) -> Element:
        ws = self.witnesses[i]
        if 1 <= j <= len(ws):
            return ws[j - 1]
        s = ws[0].suite
        return s.multi_exp(list(ws), self._weights(j, s.q))


def deal(params: KzgParams, poly: Bivariate, t: int, holders: Sequence[int]):
    """Full shares for ``holders`` and the matching public board."""
    q = params.suite.q
    reduced = {j: poly.at_y(j) for j in points(t)}
    commits = tuple(kzg_commit(params, reduced[j]) for j in points(t))
    board = ShareBoard(t, commits)
    shares = {}
    for i in holders:
        shares[i] = FullShare(i, tuple(poly.at_x(i)))
        board.witnesses[i] = tuple(kzg_create_witness(params, reduced[j], i).w for j in points(t))
    return shares, board


def dpss_share(params: KzgParams, secret: int, cfg: CommitteeConfig, rng):
    """Share ``secret`` among ``cfg.members``; returns ``(shares, board)``.

    ``shares`` maps holder index (1-based position in the sorted member
    list) to its :class:`FullShare`.
    """
    q = params.suite.q
    if 2 * cfg.t > params.degree:
        raise DpssError("threshold exceeds the commitment degree bound")
    poly = Bivariate.random(cfg.t, 2 * cfg.t, q, rng, constant=secret)
    return deal(params, poly, cfg.t, range(1, cfg.n + 1))


def dpss_open(shares: Sequence[FullShare], t: int, q: int) -> int:
    shares = list(shares)
    idx = [s.index for s in shares]
    if len(set(idx)) != len(idx):
        raise DpssError("duplicate holder index")
    if len(shares) < t + 1:
        raise DpssError(f"reconstruction needs {t + 1} shares, got {len(shares)}")
    base = shares[:t + 1]
    if len(shares) > t + 1:
        # every y-coefficient must lie on one degree-t polynomial in x
        width = max(len(s.coeffs) for s in shares)
        col = lambda s, k: s.coeffs[k] if k < len(s.coeffs) else 0
        for k in range(width):
            pts = [(s.index, col(s, k)) for s in base]
            for s in shares[t + 1:]:
                if field.interpolate_at(pts, s.index, q) != col(s, k) % q:
                    raise DpssError(f"inconsistent share from holder {s.index}")
    return field.interpolate_at([(s.index, s.coeffs[0] if s.coeffs else 0) for s in base], 0, q)
