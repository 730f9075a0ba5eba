"""Committee simulation: bootstrap, verifiable handoff, opening and key grants.

Two handoff paths share one message bus:

``churp`` (new threshold >= old)
    share reduction onto 2t'+1 helpers, a common zero-hole polynomial
    summed from per-helper contributions, then full-share distribution of
    F = f + f'. The zero polynomial is reused for every shared secret.
``reshare`` (new threshold < old)
    t+1 old holders each deal a fresh polynomial of the new dimensions whose
    constant is their Lagrange-weighted share; the new shares are the sum.

Every value that crosses the bus is checked against public commitments and
a failed check aborts the handoff, naming the sender.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field as dc_field
from typing import Any, Iterable, Optional, Sequence

from ..algebra import field
from ..algebra.groups import Element, default_rng
from ..kzg import KzgParams, KzgWitness, kzg_commit, kzg_create_witness, kzg_verify_eval, kzg_verify_point
from .bus import BROADCAST, Bus
from .sharing import (
    Bivariate,
    CommitteeConfig,
    DpssError,
    FullShare,
    HandoffError,
    ShareBoard,
    deal,
    dpss_open,
    dpss_share,
    points,
)

SECRET_NAMES = ("alpha", "theta")


@dataclass
class Node:
    member: Any
    index: int
    rng: random.Random
    shares: dict = dc_field(default_factory=dict)


# -- zero-hole polynomial ------------------------------------------------------

@dataclass(frozen=True)
class ZeroContribution:
    member: Any
    index: int
    commit: Element
    zero_witness: Element  # opening at y=0 claiming value 0
    evals: dict  # target index -> (value, witness)


def make_zero_contribution(params: KzgParams, member, index: int, t: int, targets: Iterable[int], rng,
                           constant: int = 0) -> ZeroContribution:
    q = params.suite.q
    poly = field.random_poly(2 * t, q, rng, constant=constant)
    evals = {}
    for k in targets:
        wit = kzg_create_witness(params, poly, k)
        evals[k] = (wit.value, wit.w)
    return ZeroContribution(member, index, kzg_commit(params, poly),
                            kzg_create_witness(params, poly, 0).w, evals)


def check_zero_contribution(params: KzgParams, c: ZeroContribution, targets: Optional[Iterable[int]] = None) -> None:
    if not kzg_verify_eval(params, c.commit, KzgWitness(0, 0, c.zero_witness)):
        raise HandoffError(c.member, "zero-share contribution has a nonzero constant")
    for k in (c.evals if targets is None else targets):
        v, w = c.evals[k]
        if not kzg_verify_eval(params, c.commit, KzgWitness(k, v, w)):
            raise HandoffError(c.member, "zero-share evaluation does not match its commitment")


def dpss_zero_poly(params: KzgParams, contributions: Sequence[ZeroContribution]) -> dict:
    """Check every contribution and return the summed evaluations f'(k)."""
    q = params.suite.q
    total: dict = {}
    for c in sorted(contributions, key=lambda c: c.index):
        check_zero_contribution(params, c)
        for k, (v, _) in c.evals.items():
            total[k] = (total.get(k, 0) + v) % q
    return total


# -- transcript ---------------------------------------------------------------

@dataclass(frozen=True)
class DealerPost:
    E: Element  # g^f(i,0)
    old_witness: Element  # opens the old board's f(x,0) at x=i
    commits: tuple  # commitments to g_i(x, j)
    G0: Element  # g^g_i(0,0)
    w0: Element
    witnesses: dict  # new holder -> tuple over j


@dataclass
class HandoffTranscript:
    epoch: int
    old_members: tuple
    new_members: tuple
    t_old: int
    t_new: int
    path: str
    reduce: dict = dc_field(default_factory=dict)  # (name, i, j) -> witness
    zero: dict = dc_field(default_factory=dict)  # j -> (commit, zero_witness, {k: witness})
    helpers: dict = dc_field(default_factory=dict)  # k -> (Z_k, E_k, wz_k)
    dealers: dict = dc_field(default_factory=dict)  # (name, i) -> DealerPost
    boards: dict = dc_field(default_factory=dict)  # name -> new ShareBoard
    values: dict = dc_field(default_factory=dict)  # private openings, never published

    def public(self) -> "HandoffTranscript":
        return HandoffTranscript(self.epoch, self.old_members, self.new_members, self.t_old, self.t_new,
                                 self.path, dict(self.reduce), dict(self.zero), dict(self.helpers),
                                 dict(self.dealers), dict(self.boards), {})


def _helper_checks(params, old_boards, tr, k, Z, E, wz, commits, zsum, wsum):
    """Public checks on the board posted by helper k; raises on failure."""
    member = tr.new_members[k - 1]
    if not kzg_verify_point(params, Z, 0, E, wz):
        raise HandoffError(member, "zero-part opening fails")
    if not kzg_verify_point(params, zsum, k, E, wsum):
        raise HandoffError(member, "zero-part value disagrees with the summed contributions")
    for name, C in commits.items():
        if C != old_boards[name].commitment_at(k) * Z:
            raise HandoffError(member, "refreshed commitment is not old commitment times zero part")


def _dealer_checks(params, old_boards, tr, name, i, L, post: DealerPost):
    member = tr.old_members[i - 1]
    old = old_boards[name]
    if not kzg_verify_point(params, old.commitment_at(0), i, post.E, post.old_witness):
        raise HandoffError(member, "dealt constant not backed by the old board")
    D0 = ShareBoard(tr.t_new, post.commits).commitment_at(0)
    if not kzg_verify_point(params, D0, 0, post.G0, post.w0):
        raise HandoffError(member, "dealing constant opening fails")
    if post.G0 != post.E ** L:
        raise HandoffError(member, "dealing constant is not the weighted old share")


def verify_transcript(params: KzgParams, old_boards: dict, tr: HandoffTranscript) -> bool:
    """Check every public relation of a handoff, plus private openings if present.

    Raises :class:`HandoffError` naming the first offending member.
    """
    s = params.suite
    q = s.q
    if tr.path == "churp":
        helpers = list(points(tr.t_new))
        zsum = s.identity("G")
        for j in helpers:
            commit, w0, _ = tr.zero[j]
            if not kzg_verify_eval(params, commit, KzgWitness(0, 0, w0)):
                raise HandoffError(tr.new_members[j - 1], "zero-share contribution has a nonzero constant")
            zsum = zsum * commit
        weights = field.lagrange_coefficients(helpers, 0, q)
        hole = s.identity("G")
        for k, wk in zip(helpers, weights):
            Z, E, wz = tr.helpers[k]
            wsum = s.identity("G")
            for j in helpers:
                wsum = wsum * tr.zero[j][2][k]
            commits = {name: b.commits[k - 1] for name, b in tr.boards.items()}
            _helper_checks(params, old_boards, tr, k, Z, E, wz, commits, zsum, wsum)
            hole = hole * E ** wk
        if not hole.is_identity():
            raise HandoffError(None, "zero polynomial has a nonzero constant")
    elif tr.path == "reshare":
        quorum = sorted({i for _, i in tr.dealers})
        L = dict(zip(quorum, field.lagrange_coefficients(quorum, 0, q)))
        for name, board in tr.boards.items():
            posts = [tr.dealers[(name, i)] for i in quorum]
            for i, post in zip(quorum, posts):
                _dealer_checks(params, old_boards, tr, name, i, L[i], post)
            for j in points(tr.t_new):
                prod = s.identity("G")
                for post in posts:
                    prod = prod * post.commits[j - 1]
                if prod != board.commits[j - 1]:
                    raise HandoffError(None, "new board is not the product of the dealings")
    else:
        raise DpssError(f"unknown handoff path {tr.path!r}")

    for key, v in tr.values.items():
        kind = key[0]
        if kind == "reduce":
            _, name, i, j = key
            ok = kzg_verify_eval(params, old_boards[name].commitment_at(j), KzgWitness(i, v, tr.reduce[(name, i, j)]))
            who = tr.old_members[i - 1]
        elif kind == "zero":
            _, j, k = key
            commit, _, ws = tr.zero[j]
            ok = kzg_verify_eval(params, commit, KzgWitness(k, v, ws[k]))
            who = tr.new_members[j - 1]
        elif kind == "full":
            _, name, k, i = key
            b = tr.boards[name]
            ok = kzg_verify_eval(params, b.commits[k - 1], KzgWitness(i, v, b.witnesses[i][k - 1]))
            who = tr.new_members[k - 1]
        elif kind == "deal":
            _, name, i, m, j = key
            post = tr.dealers[(name, i)]
            ok = kzg_verify_eval(params, post.commits[j - 1], KzgWitness(m, v, post.witnesses[m][j - 1]))
            who = tr.old_members[i - 1]
        else:
            raise DpssError(f"unknown opening kind {kind!r}")
        if not ok:
            raise HandoffError(who, f"{kind} opening fails")
    return True


# -- committee ----------------------------------------------------------------

def _map(executor, fn, items):
    items = list(items)
    if executor is None:
        return [fn(x) for x in items]
    return list(executor.map(fn, items))


@dataclass(frozen=True)
class GrantEvent:
    epoch: int
    depth: int
    quorum: tuple
    policy: str
    recipient: str
    key_id: str


class GrantLog:
    def __init__(self, events: Iterable[GrantEvent] = ()):
        self.events: list[GrantEvent] = list(events)

    def record(self, event: GrantEvent) -> None:
        self.events.append(event)

    def by_recipient(self, recipient: str) -> list[GrantEvent]:
        return [e for e in self.events if e.recipient == recipient]

    def by_depth(self, depth: int) -> list[GrantEvent]:
        return [e for e in self.events if e.depth == depth]

    def by_key(self, key_id: str) -> list[GrantEvent]:
        return [e for e in self.events if e.key_id == key_id]

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


def key_id(key) -> str:
    return hashlib.sha256(bytes(key.k0b) + bytes(key.k1)).hexdigest()[:32]


class Committee:
    def __init__(self, cfg: CommitteeConfig, params: KzgParams, nodes: dict, boards: dict):
        self.cfg = cfg
        self.params = params
        self.nodes = nodes
        self.boards = boards

    @property
    def q(self) -> int:
        return self.params.suite.q

    @property
    def names(self) -> tuple:
        return tuple(self.boards)

    @classmethod
    def bootstrap(cls, params: KzgParams, cfg: CommitteeConfig, secrets: dict, rng=None) -> "Committee":
        """Dealer-run initial sharing of every named secret."""
        rng = default_rng(rng)
        nodes = {m: Node(m, cfg.index_of(m), random.Random(rng.getrandbits(64))) for m in cfg.members}
        boards = {}
        for name, secret in secrets.items():
            shares, board = dpss_share(params, secret, cfg, rng)
            boards[name] = board
            for node in nodes.values():
                node.shares[name] = shares[node.index]
        return cls(cfg, params, nodes, boards)

    def ordered(self) -> list[Node]:
        return sorted(self.nodes.values(), key=lambda n: n.index)

    def shares(self, name: str, members: Optional[Iterable] = None) -> list[FullShare]:
        pick = self.ordered() if members is None else [self.nodes[m] for m in members]
        return [n.shares[name] for n in pick]

    def open(self, name: str, quorum: Optional[Sequence] = None) -> int:
        if quorum is None:
            quorum = [n.member for n in self.ordered()[:self.cfg.t + 1]]
        return dpss_open(self.shares(name, quorum), self.cfg.t, self.q)

    # -- handoff --------------------------------------------------------------

    def handoff(self, new_cfg: CommitteeConfig, rng=None, interceptors=(), offline=(), faults=None,
                executor=None):
        """Move every secret to ``new_cfg``; returns ``(committee, transcript)``.

        ``faults`` maps a member to a set of misbehaviours used in tests:
        ``"zero_constant"`` (helper contributes a zero share with constant 1)
        and ``"deal_constant"`` (dealer shifts its dealt constant by one).
        """
        rng = default_rng(rng)
        faults = faults or {}
        t_old, t_new = self.cfg.t, new_cfg.t
        if 2 * max(t_old, t_new) > self.params.degree:
            raise DpssError("threshold exceeds the commitment degree bound")
        if new_cfg.epoch <= self.cfg.epoch:
            new_cfg = CommitteeConfig(new_cfg.members, new_cfg.t, self.cfg.epoch + 1, new_cfg.depth)
        bus = Bus(rng.getrandbits(64), interceptors)
        new_nodes = {m: Node(m, new_cfg.index_of(m), random.Random(rng.getrandbits(64))) for m in new_cfg.members}
        online = [n for n in self.ordered() if n.member not in set(offline)]
        if len(online) < t_old + 1:
            raise HandoffError(None, f"only {len(online)} old members online, need {t_old + 1}")
        tr = HandoffTranscript(new_cfg.epoch, self.cfg.members, new_cfg.members, t_old, t_new,
                               "churp" if t_new >= t_old else "reshare")
        if tr.path == "churp":
            boards = self._churp(new_cfg, new_nodes, online, bus, tr, faults, executor)
        else:
            boards = self._reshare(new_cfg, new_nodes, online, bus, tr, faults, executor)
        tr.boards = boards
        for node in self.nodes.values():
            node.shares = {}
        return Committee(new_cfg, self.params, new_nodes, boards), tr

    def _churp(self, new_cfg, new_nodes, online, bus, tr, faults, executor):
        params, q, names = self.params, self.q, self.names
        t_old, t_new = self.cfg.t, new_cfg.t
        helpers = [new_nodes[new_cfg.member_at(k)] for k in points(t_new)]
        helper_ids = [h.member for h in helpers]
        old_index = {m: self.cfg.index_of(m) for m in self.cfg.members}
        new_index = {m: new_cfg.index_of(m) for m in new_cfg.members}

        # round 1: share reduction, old holder i sends f(i, j) to helper j
        def send_reduced(node):
            return [(h.member, {name: (node.shares[name].at(h.index, q),
                                       self.boards[name].witness_at(node.index, h.index)) for name in names})
                    for h in helpers]

        for node, out in zip(online, _map(executor, send_reduced, online)):
            for dst, payload in out:
                bus.send(node.member, dst, "reduce", payload)
        inbox = bus.deliver(helper_ids)

        def recv_reduced(h):
            msgs = sorted(inbox[h.member], key=lambda m: old_index[m.src])
            out = {}
            for name in names:
                C = self.boards[name].commitment_at(h.index)
                pts = []
                for msg in msgs:
                    v, w = msg.payload[name]
                    i = old_index[msg.src]
                    if not kzg_verify_eval(params, C, KzgWitness(i, v, w)):
                        raise HandoffError(msg.src, "reduced share fails its commitment")
                    pts.append((i, v))
                if len(pts) < t_old + 1:
                    raise HandoffError(None, f"helper {h.member} got {len(pts)} reduced shares, need {t_old + 1}")
                # degree t_old in x: exactly t_old+1 evaluations
                out[name] = field.interpolate(pts[:t_old + 1], q)
            return out

        reduced = dict(zip(helper_ids, _map(executor, recv_reduced, helpers)))
        for h in helpers:
            for msg in inbox[h.member]:
                for name in names:
                    v, w = msg.payload[name]
                    tr.reduce[(name, old_index[msg.src], h.index)] = w
                    tr.values[("reduce", name, old_index[msg.src], h.index)] = v

        # round 2: zero-hole contributions among helpers
        targets = [h.index for h in helpers]

        def contribute(h):
            const = 1 if "zero_constant" in faults.get(h.member, ()) else 0
            return make_zero_contribution(params, h.member, h.index, t_new, targets, h.rng, constant=const)

        contribs = _map(executor, contribute, helpers)
        for c in contribs:
            bus.send(c.member, BROADCAST, "zero_commit", (c.commit, c.zero_witness))
            for h in helpers:
                bus.send(c.member, h.member, "zero_eval", c.evals[h.index])
        inbox = bus.deliver(helper_ids)

        def recv_zero(h):
            commits, evals = {}, {}
            for msg in inbox[h.member]:
                (commits if msg.kind == "zero_commit" else evals)[msg.src] = msg.payload
            total = 0
            for src in sorted(helper_ids, key=new_index.get):
                if src not in commits or src not in evals:
                    raise HandoffError(src, "missing zero-share contribution")
                commit, w0 = commits[src]
                v, w = evals[src]
                c = ZeroContribution(src, new_index[src], commit, w0, {h.index: (v, w)})
                check_zero_contribution(params, c)
                total += v
            return total % q, commits, evals

        zero_out = _map(executor, recv_zero, helpers)
        for h, (_, commits, evals) in zip(helpers, zero_out):
            for src, (commit, w0) in commits.items():
                j = new_index[src]
                entry = tr.zero.setdefault(j, (commit, w0, {}))
                entry[2][h.index] = evals[src][1]
                tr.values[("zero", j, h.index)] = evals[src][0]
        zero_at = {h.member: out[0] for h, out in zip(helpers, zero_out)}

        # round 3: refresh reduced shares and distribute F(i, k)
        def refresh(h):
            fk = zero_at[h.member]
            fprime = [fk] + [h.rng.randrange(q) for _ in range(t_new)]
            Z = kzg_commit(params, fprime)
            wz = kzg_create_witness(params, fprime, 0).w
            F = {name: field.add(reduced[h.member][name], fprime, q) for name in names}
            commits = {name: kzg_commit(params, F[name]) for name in names}
            dist = {}
            for m in new_cfg.members:
                i = new_index[m]
                dist[m] = {}
                for name in names:
                    wit = kzg_create_witness(params, F[name], i)
                    dist[m][name] = (wit.value, wit.w)
            return Z, params.suite.g ** fk, wz, commits, dist

        for h, (Z, E, wz, commits, dist) in zip(helpers, _map(executor, refresh, helpers)):
            bus.send(h.member, BROADCAST, "board", (Z, E, wz, commits))
            for m, payload in dist.items():
                bus.send(h.member, m, "full", payload)
        inbox = bus.deliver(new_cfg.members)

        # public checks, identical for every observer
        posted = {}
        for msg in inbox[new_cfg.members[0]]:
            if msg.kind == "board":
                posted[new_index[msg.src]] = msg.payload
        zsum = params.suite.identity("G")
        for j in targets:
            zsum = zsum * tr.zero[j][0]
        hole = params.suite.identity("G")
        for k, wk in zip(targets, field.lagrange_coefficients(targets, 0, q)):
            if k not in posted:
                raise HandoffError(new_cfg.member_at(k), "missing refreshed board")
            Z, E, wz, commits = posted[k]
            wsum = params.suite.identity("G")
            for j in targets:
                wsum = wsum * tr.zero[j][2][k]
            _helper_checks(params, self.boards, tr, k, Z, E, wz, commits, zsum, wsum)
            tr.helpers[k] = (Z, E, wz)
            hole = hole * E ** wk
        if not hole.is_identity():
            raise HandoffError(None, "zero polynomial has a nonzero constant")

        def recv_full(m):
            node = new_nodes[m]
            got = {new_index[msg.src]: msg for msg in inbox[m] if msg.kind == "full"}
            shares, wits = {}, {}
            for name in names:
                pts, ws = [], []
                for k in targets:
                    if k not in got:
                        raise HandoffError(new_cfg.member_at(k), "missing full-share evaluation")
                    v, w = got[k].payload[name]
                    if not kzg_verify_eval(params, posted[k][3][name], KzgWitness(node.index, v, w)):
                        raise HandoffError(new_cfg.member_at(k), "full-share evaluation fails its commitment")
                    pts.append((k, v))
                    ws.append(w)
                shares[name] = FullShare(node.index, tuple(field.interpolate(pts, q)))
                wits[name] = tuple(ws)
            return shares, wits, {(name, k): got[k].payload[name][0] for name in names for k in targets}

        boards = {name: ShareBoard(t_new, tuple(posted[k][3][name] for k in targets)) for name in names}
        for m, (shares, wits, vals) in zip(new_cfg.members, _map(executor, recv_full, new_cfg.members)):
            node = new_nodes[m]
            node.shares = shares
            for name in names:
                boards[name].witnesses[node.index] = wits[name]
            for (name, k), v in vals.items():
                tr.values[("full", name, k, node.index)] = v
        return boards

    def _reshare(self, new_cfg, new_nodes, online, bus, tr, faults, executor):
        params, q, names = self.params, self.q, self.names
        t_new = new_cfg.t
        quorum = online[:self.cfg.t + 1]
        xs = [n.index for n in quorum]
        L = dict(zip(xs, field.lagrange_coefficients(xs, 0, q)))
        old_index = {m: self.cfg.index_of(m) for m in self.cfg.members}
        new_index = {m: new_cfg.index_of(m) for m in new_cfg.members}
        holders = list(range(1, new_cfg.n + 1))

        def dealing(node):
            posts, dealt = {}, {}
            for name in names:
                v = node.shares[name].coeffs[0]
                c = L[node.index] * v
                if "deal_constant" in faults.get(node.member, ()):
                    c += 1
                poly = Bivariate.random(t_new, 2 * t_new, q, node.rng, constant=c)
                shares, board = deal(params, poly, t_new, holders)
                posts[name] = DealerPost(
                    E=params.suite.g ** v,
                    old_witness=self.boards[name].witness_at(node.index, 0),
                    commits=board.commits,
                    G0=params.suite.g ** c,
                    w0=kzg_create_witness(params, poly.at_y(0), 0).w,
                    witnesses=dict(board.witnesses),
                )
                dealt[name] = shares
            return posts, dealt

        for node, (posts, dealt) in zip(quorum, _map(executor, dealing, quorum)):
            bus.send(node.member, BROADCAST, "deal_board", posts)
            for m in new_cfg.members:
                bus.send(node.member, m, "deal", {name: dealt[name][new_index[m]].coeffs for name in names})
        inbox = bus.deliver(new_cfg.members)

        posted = {}
        for msg in inbox[new_cfg.members[0]]:
            if msg.kind == "deal_board":
                posted[old_index[msg.src]] = msg.payload
        for i in xs:
            if i not in posted:
                raise HandoffError(self.cfg.member_at(i), "missing dealing")
            for name in names:
                _dealer_checks(params, self.boards, tr, name, i, L[i], posted[i][name])
                tr.dealers[(name, i)] = posted[i][name]

        def recv_deal(m):
            node = new_nodes[m]
            got = {old_index[msg.src]: msg.payload for msg in inbox[m] if msg.kind == "deal"}
            shares, vals = {}, {}
            for name in names:
                total = [0] * (2 * t_new + 1)
                for i in xs:
                    dealer = self.cfg.member_at(i)
                    if i not in got:
                        raise HandoffError(dealer, "missing dealt share")
                    coeffs = got[i][name]
                    post = posted[i][name]
                    if len(coeffs) > 2 * t_new + 1:
                        raise HandoffError(dealer, "dealt share has excess degree")
                    for j in points(t_new):
                        v = field.evaluate(coeffs, j, q)
                        if not kzg_verify_eval(params, post.commits[j - 1], KzgWitness(node.index, v, post.witnesses[node.index][j - 1])):
                            raise HandoffError(dealer, "dealt share fails its commitment")
                        vals[(name, i, j)] = v
                    total = field.add(total, coeffs, q)
                shares[name] = FullShare(node.index, tuple(total))
            return shares, vals

        g1 = params.suite.identity("G")
        boards = {}
        for name in names:
            commits = []
            for j in points(t_new):
                prod = g1
                for i in xs:
                    prod = prod * posted[i][name].commits[j - 1]
                commits.append(prod)
            boards[name] = ShareBoard(t_new, tuple(commits))
        for m, (shares, vals) in zip(new_cfg.members, _map(executor, recv_deal, new_cfg.members)):
            node = new_nodes[m]
            node.shares = shares
            for name in names:
                ws = []
                for j in points(t_new):
                    prod = g1
                    for i in xs:
                        prod = prod * posted[i][name].witnesses[node.index][j - 1]
                    ws.append(prod)
                boards[name].witnesses[node.index] = tuple(ws)
            for (name, i, j), v in vals.items():
                tr.values[("deal", name, i, node.index, j)] = v
        return boards

    # -- key grants -----------------------------------------------------------

    def grant_key(self, mpk, policy, recipient: str, rng=None, quorum: Optional[Sequence] = None,
                  log: Optional[GrantLog] = None):
        return dpss_open_and_keygen(self, mpk, policy, recipient, rng, quorum, log)


def dpss_open_and_keygen(committee: Committee, mpk, policy, recipient: str, rng=None,
                         quorum: Optional[Sequence] = None, log: Optional[GrantLog] = None):
    """Reconstruct (alpha, theta) from a quorum, issue a key, forget the secrets."""
    from ..abet import abet_keygen_from
    from ..algebra.policy import MSP, as_node, policy_text

    cfg = committee.cfg
    if quorum is None:
        quorum = [n.member for n in committee.ordered()[:cfg.t + 1]]
    quorum = tuple(sorted(quorum))
    if len(quorum) < cfg.t + 1:
        raise DpssError(f"quorum of {len(quorum)} is below t+1 = {cfg.t + 1}")
    alpha = committee.open("alpha", quorum)
    theta = committee.open("theta", quorum)
    try:
        key = abet_keygen_from(mpk, alpha, theta, policy, mpk.index(cfg.depth), rng)
    finally:
        alpha = theta = 0  # best effort; Python ints are immutable
    text = policy_text(policy.tree if isinstance(policy, MSP) else as_node(policy))
    if log is not None:
        log.record(GrantEvent(cfg.epoch, cfg.depth, quorum, text, recipient, key_id(key)))
    return key
