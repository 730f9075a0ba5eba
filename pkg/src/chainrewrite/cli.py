"""Command-line entry point.

Every command prints JSON lines on stdout. Exit status: 0 success,
1 verification failure, 2 usage error (bad flags, missing state).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import codec
from .abet import KeyBlackbox, abet_setup
from .bench import Bench
from .chain import (
    Chain,
    DataTx,
    GrantTx,
    NotMutable,
    TranscriptTx,
    chain_ok,
    decode_tx,
    encode_tx,
    load_chain,
    merkle_leaf,
    mine_block,
    rewrite_in_place,
    save_chain,
    validate_chain,
)
from .config import PROFILES, RunConfig, default_profile
from .dpss import Committee, CommitteeConfig, HandoffError, GrantEvent, tamper, verify_transcript
from .dpss.committee import key_id
from .kzg import kzg_setup
from .rewrite import DecryptionDenied, MutableTx, RewriteError, fw_adapt, fw_hash, fw_judge_link, fw_judge_trace, fw_verify
from .sigma import sig_keygen


class UsageError(Exception):
    pass


class VerifyFailed(Exception):
    pass


def emit(**record) -> None:
    print(json.dumps(record, sort_keys=True), flush=True)


def _csv(text: Optional[str]) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()] if text else []


def _locator(text: str):
    try:
        h, i = text.split(":")
        return int(h), int(i)
    except ValueError:
        raise UsageError(f"bad locator {text!r}, expected HEIGHT:INDEX") from None


class State:
    """Files under the state directory."""

    def __init__(self, root):
        self.root = Path(root)

    def path(self, *parts) -> Path:
        return self.root.joinpath(*parts)

    @property
    def config(self) -> RunConfig:
        p = self.path("config.json")
        if not p.exists():
            raise UsageError(f"no state in {self.root}; run setup first")
        return RunConfig.load(p)

    @property
    def suite(self):
        return self.config.suite

    def read(self, *parts) -> bytes:
        p = self.path(*parts)
        if not p.exists():
            raise UsageError(f"missing {p}")
        return p.read_bytes()

    def write(self, data: bytes, *parts) -> Path:
        p = self.path(*parts)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_bytes(data)
        return p

    def mpk(self):
        return codec.decode_mpk(self.read("mpk.bin"), self.suite)

    def committee(self) -> Committee:
        return codec.decode_committee(self.read("committee.bin"), self.suite)

    def save_committee(self, c: Committee) -> None:
        self.write(codec.encode_committee(c), "committee.bin")

    def chain(self) -> Chain:
        if not self.path("chain", "chain.meta").exists():
            raise UsageError("no chain; run setup first")
        return load_chain(self.path("chain"), self.suite)

    def user_sig(self, name: str, rng):
        p = self.path("users", f"{name}.sig")
        if p.exists():
            return codec.decode_sigkey(p.read_bytes(), self.suite)
        kp = sig_keygen(self.suite, rng)
        self.write(codec.encode_sigkey(kp), "users", f"{name}.sig")
        return kp

    def user_key(self, name: str):
        return codec.decode_key(self.read("users", f"{name}.key"), self.suite)

    def pool_add(self, tx_bytes: bytes) -> Path:
        pool = self.path("pool")
        pool.mkdir(parents=True, exist_ok=True)
        n = len(list(pool.glob("*.tx")))
        return self.write(tx_bytes, "pool", f"{n:06d}.tx")

    def pool(self) -> list[Path]:
        return sorted(self.path("pool").glob("*.tx")) if self.path("pool").exists() else []


def _rng(args, state: Optional[State], salt: str):
    if getattr(args, "seed", None) is not None:
        return RunConfig(seed=args.seed).rng(salt)
    if state is not None:
        return state.config.rng(salt)
    return RunConfig().rng(salt)


# -- commands -----------------------------------------------------------------

def cmd_setup(args) -> int:
    cfg = RunConfig(profile=args.profile or default_profile(), k=args.k, n=args.n, t=args.t, t_max=args.t_max,
                    difficulty=args.difficulty, seed=args.seed)
    state = State(args.dir)
    state.root.mkdir(parents=True, exist_ok=True)
    cfg.save(state.path("config.json"))
    suite = cfg.suite
    rng = cfg.rng("setup")
    master = abet_setup(suite, cfg.k, rng)
    _, params = kzg_setup(suite, 2 * cfg.t_max, rng)
    state.write(codec.encode_mpk(master.mpk), "mpk.bin")
    state.write(codec.encode_master(master), "master.bin")
    state.write(codec.encode_kzg(params), "kzg.bin")
    save_chain(Chain.create(suite, cfg.difficulty, rng), state.path("chain"))
    emit(cmd="setup", profile=cfg.profile, k=cfg.k, n=cfg.n, t=cfg.t, difficulty=cfg.difficulty,
         files=["config.json", "mpk.bin", "master.bin", "kzg.bin", "chain/"])
    return 0


def _members(args, cfg: RunConfig) -> tuple:
    return tuple(_csv(args.members)) or tuple(f"m{i}" for i in range(1, cfg.n + 1))


def cmd_committee_share(args) -> int:
    state = State(args.dir)
    cfg = state.config
    suite = cfg.suite
    master = codec.decode_master(state.read("master.bin"), suite)
    params = codec.decode_kzg(state.read("kzg.bin"), suite)
    ccfg = CommitteeConfig(_members(args, cfg), args.t or cfg.t, 0, args.depth)
    if 2 * ccfg.t > params.degree:
        raise UsageError("threshold exceeds the setup degree bound; rerun setup with a larger --t-max")
    c = Committee.bootstrap(params, ccfg, {"alpha": master.alpha, "theta": master.theta}, _rng(args, state, "share"))
    state.save_committee(c)
    p = state.path("master.bin")
    p.write_bytes(bytes(len(p.read_bytes())))
    p.unlink()
    emit(cmd="committee share", epoch=ccfg.epoch, depth=ccfg.depth, members=list(ccfg.members), t=ccfg.t)
    return 0


def cmd_committee_handoff(args) -> int:
    state = State(args.dir)
    cfg = state.config
    old = state.committee()
    new_cfg = CommitteeConfig(_members(args, cfg), args.t or old.cfg.t, old.cfg.epoch + 1,
                              args.depth if args.depth is not None else old.cfg.depth)
    hooks = []
    if args.corrupt:
        hooks.append(tamper("reduce", args.corrupt, lambda p: {k: (v + 1, w) for k, (v, w) in p.items()}))
    old_boards = dict(old.boards)
    try:
        new, tr = old.handoff(new_cfg, _rng(args, state, f"handoff{new_cfg.epoch}"), interceptors=hooks)
        verify_transcript(new.params, old_boards, tr)
    except HandoffError as exc:
        emit(cmd="committee handoff", ok=False, accused=exc.member, reason=exc.reason)
        return 1
    state.save_committee(new)
    state.pool_add(codec.encode_transcript(tr.public()))
    emit(cmd="committee handoff", ok=True, epoch=new_cfg.epoch, path=tr.path, members=list(new_cfg.members),
         t=new_cfg.t)
    return 0


def cmd_committee_grant(args) -> int:
    state = State(args.dir)
    c = state.committee()
    mpk = state.mpk()
    quorum = _csv(args.quorum) or None
    events = []

    class _Log:
        def record(self, ev):
            events.append(ev)

    key = c.grant_key(mpk, args.policy, args.user, _rng(args, state, f"grant:{args.user}"), quorum, _Log())
    state.write(codec.encode_key(key), "users", f"{args.user}.key")
    state.pool_add(codec.encode_grant(events[0]))
    ev = events[0]
    emit(cmd="committee grant", user=args.user, policy=ev.policy, depth=ev.depth, epoch=ev.epoch,
         quorum=list(ev.quorum), key_id=ev.key_id)
    return 0


def cmd_tx_hash(args) -> int:
    state = State(args.dir)
    mpk = state.mpk()
    rng = _rng(args, state, f"hash:{args.user}:{args.content}")
    author = state.user_sig(args.user, rng)
    depth = args.depth
    if depth is None:
        depth = state.committee().cfg.depth if state.path("committee.bin").exists() else 1
    attrs = _csv(args.attrs)
    if not attrs:
        raise UsageError("--attrs must name at least one attribute")
    tx = fw_hash(mpk, author, args.content.encode(), attrs, mpk.index(depth), rng)
    p = state.pool_add(codec.encode_mutable_tx(tx))
    emit(cmd="tx hash", file=str(p), leaf=merkle_leaf(tx).hex(), attrs=list(tx.attrs), depth=depth)
    return 0


def _load_tx(state: State, args):
    if args.file:
        data = Path(args.file).read_bytes() if Path(args.file).exists() else None
        if data is None:
            raise UsageError(f"missing {args.file}")
        return decode_tx(data, state.suite)
    if args.locator:
        return state.chain().tx_at(_locator(args.locator))
    raise UsageError("give --file or --locator")


def cmd_tx_verify(args) -> int:
    state = State(args.dir)
    tx = _load_tx(state, args)
    if not isinstance(tx, MutableTx):
        emit(cmd="tx verify", ok=True, mutable=False)
        return 0
    ok = fw_verify(state.mpk(), tx)
    emit(cmd="tx verify", ok=ok, mutable=True, leaf=merkle_leaf(tx).hex())
    return 0 if ok else 1


def cmd_tx_adapt(args) -> int:
    state = State(args.dir)
    mpk = state.mpk()
    tx = _load_tx(state, args)
    if not isinstance(tx, MutableTx):
        raise UsageError("transaction is not mutable")
    rng = _rng(args, state, f"adapt:{args.user}:{args.content}")
    new = fw_adapt(mpk, state.user_key(args.user), state.user_sig(args.user, rng), tx, args.content.encode(), rng,
                   attrs=_csv(args.attrs) or None, strict_attributes=args.strict_attributes)
    out = Path(args.out) if args.out else Path(str(args.file or "adapted") + ".adapted")
    out.write_bytes(codec.encode_mutable_tx(new))
    emit(cmd="tx adapt", file=str(out), leaf=merkle_leaf(new).hex(), leaf_unchanged=merkle_leaf(new) == merkle_leaf(tx))
    return 0


def cmd_chain_mine(args) -> int:
    state = State(args.dir)
    cfg = state.config
    chain = state.chain()
    rng = _rng(args, state, f"mine{chain.height + 1}")
    pool = state.pool()
    txs = [decode_tx(p.read_bytes(), chain.suite) for p in pool]
    if args.synthetic:
        mpk = state.mpk()
        author = state.user_sig("synthetic", rng)
        attrs = _csv(args.attrs) or ["public"]
        for i in range(args.synthetic):
            body = f"synthetic {chain.height + 1}/{i}".encode()
            if args.mutable_every and i % args.mutable_every == 0:
                txs.append(fw_hash(mpk, author, body, attrs, mpk.index(args.depth), rng))
            else:
                txs.append(DataTx(body))
    block = mine_block(chain, txs, rng)
    save_chain(chain, state.path("chain"))
    for p in pool:
        p.unlink()
    emit(cmd="chain mine", height=block.height, txs=len(block.txs), hash=block.hash().hex(),
         difficulty=cfg.difficulty)
    return 0


def cmd_chain_validate(args) -> int:
    state = State(args.dir)
    chain = state.chain()
    reports = validate_chain(chain, state.mpk())
    for r in reports:
        emit(height=r.height, ok=r.ok, millis=round(r.millis, 3), errors=r.errors)
    return 0 if chain_ok(reports) else 1


def cmd_chain_rewrite(args) -> int:
    state = State(args.dir)
    chain = state.chain()
    mpk = state.mpk()
    loc = _locator(args.locator)
    before = [b.hash() for b in chain.blocks]
    rng = _rng(args, state, f"rewrite:{args.locator}:{args.content}")
    old, new = rewrite_in_place(chain, loc, mpk, state.user_key(args.user), state.user_sig(args.user, rng),
                                args.content.encode(), rng)
    save_chain(chain, state.path("chain"))
    rw = state.path("rewrites")
    rw.mkdir(parents=True, exist_ok=True)
    pair = state.write(codec.encode_rewrite_pair(encode_tx(old), encode_tx(new)), "rewrites",
                       f"{len(list(rw.glob('*.pair'))):06d}.pair")
    emit(cmd="chain rewrite", locator=args.locator, pair=str(pair),
         headers_unchanged=before == [b.hash() for b in chain.blocks])
    return 0


def cmd_judge_link(args) -> int:
    state = State(args.dir)
    suite = state.suite
    if args.pair:
        a, b = codec.decode_rewrite_pair(Path(args.pair).read_bytes())
    elif args.before and args.after:
        a, b = Path(args.before).read_bytes(), Path(args.after).read_bytes()
    else:
        raise UsageError("give --pair or both --before and --after")
    tx, tx2 = decode_tx(a, suite), decode_tx(b, suite)
    if not (isinstance(tx, MutableTx) and isinstance(tx2, MutableTx)):
        raise UsageError("both transactions must be mutable")
    out = fw_judge_link(tx, tx2)
    if out is None:
        emit(cmd="judge link", linked=False)
        return 1
    pk, pk2, delta = out
    emit(cmd="judge link", linked=True, pk=bytes(pk).hex(), pk_new=bytes(pk2).hex(), delta=bytes(delta).hex())
    return 0


def _read_probes(path) -> list[list[str]]:
    lines = Path(path).read_text().splitlines()
    probes = [_csv(line) for line in lines if line.strip() and not line.lstrip().startswith("#")]
    if not probes:
        raise UsageError("probe file is empty")
    return probes


def cmd_judge_trace(args) -> int:
    state = State(args.dir)
    suite = state.suite
    mpk = codec.decode_mpk(Path(args.mpk).read_bytes(), suite) if args.mpk else state.mpk()
    keys = codec.decode_blackbox(Path(args.blackbox).read_bytes(), suite)
    grants = list(state.chain().grants()) if state.path("chain", "chain.meta").exists() else []
    for p in state.pool():
        if codec.record_type(p.read_bytes()) == codec.Record.GRANT_TX:
            grants.append(codec.decode_grant(p.read_bytes()))
    accused, records = fw_judge_trace(mpk, KeyBlackbox(mpk, keys), _read_probes(args.probes), grants,
                                      args.eps, args.trials, _rng(args, state, "trace"))
    emit(cmd="judge trace", accused=sorted(accused),
         grants=[dict(epoch=g.epoch, depth=g.depth, recipient=g.recipient, policy=g.policy, key_id=g.key_id)
                 for g in records])
    return 0


def cmd_judge_blackbox(args) -> int:
    state = State(args.dir)
    keys = [state.user_key(u) for u in _csv(args.users)]
    Path(args.out).write_bytes(codec.encode_blackbox(keys))
    emit(cmd="judge blackbox", out=args.out, keys=len(keys))
    return 0


def cmd_bench(args) -> int:
    profile = args.profile or default_profile()
    b = Bench(profile, args.seed if args.seed is not None else 0)
    sizes = [int(x) for x in _csv(args.sizes)] if args.sizes else (
        [1, 2, 3, 4] if args.op == "dpss" else list(range(10, 101, 10)))
    for size in sizes:
        p = b.run(args.op, size, args.reps)
        emit(cmd="bench", op=p.op, size=p.size, seconds=p.seconds, profile=profile)
    return 0


# -- parser -------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chainrewrite", description="Accountable policy-gated blockchain rewriting.")
    p.add_argument("--dir", default="state", help="state directory (default: ./state)")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("setup")
    s.add_argument("--k", type=int, default=8)
    s.add_argument("--n", type=int, default=5)
    s.add_argument("--t", type=int, default=1)
    s.add_argument("--t-max", type=int, default=4)
    s.add_argument("--difficulty", type=int, default=8)
    s.add_argument("--profile", choices=PROFILES)
    s.add_argument("--seed", type=int)
    s.set_defaults(fn=cmd_setup)

    com = sub.add_parser("committee").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    c = com.add_parser("share")
    c.add_argument("--members")
    c.add_argument("--t", type=int)
    c.add_argument("--depth", type=int, default=1)
    c.add_argument("--seed", type=int)
    c.set_defaults(fn=cmd_committee_share)
    c = com.add_parser("handoff")
    c.add_argument("--members")
    c.add_argument("--t", type=int)
    c.add_argument("--depth", type=int)
    c.add_argument("--corrupt", help="tamper with this old member's reduced shares")
    c.add_argument("--seed", type=int)
    c.set_defaults(fn=cmd_committee_handoff)
    c = com.add_parser("grant")
    c.add_argument("--user", required=True)
    c.add_argument("--policy", required=True)
    c.add_argument("--quorum")
    c.add_argument("--seed", type=int)
    c.set_defaults(fn=cmd_committee_grant)

    tx = sub.add_parser("tx").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    c = tx.add_parser("hash")
    c.add_argument("--user", required=True)
    c.add_argument("--content", required=True)
    c.add_argument("--attrs", required=True)
    c.add_argument("--depth", type=int)
    c.add_argument("--seed", type=int)
    c.set_defaults(fn=cmd_tx_hash)
    c = tx.add_parser("verify")
    c.add_argument("--file")
    c.add_argument("--locator")
    c.set_defaults(fn=cmd_tx_verify)
    c = tx.add_parser("adapt")
    c.add_argument("--user", required=True)
    c.add_argument("--content", required=True)
    c.add_argument("--file")
    c.add_argument("--locator")
    c.add_argument("--out")
    c.add_argument("--attrs")
    c.add_argument("--strict-attributes", action="store_true")
    c.add_argument("--seed", type=int)
    c.set_defaults(fn=cmd_tx_adapt)

    ch = sub.add_parser("chain").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    c = ch.add_parser("mine")
    c.add_argument("--synthetic", type=int, default=0, help="add this many generated transactions")
    c.add_argument("--mutable-every", type=int, default=2)
    c.add_argument("--attrs")
    c.add_argument("--depth", type=int, default=1)
    c.add_argument("--seed", type=int)
    c.set_defaults(fn=cmd_chain_mine)
    c = ch.add_parser("validate")
    c.set_defaults(fn=cmd_chain_validate)
    c = ch.add_parser("rewrite")
    c.add_argument("--locator", required=True)
    c.add_argument("--user", required=True)
    c.add_argument("--content", required=True)
    c.add_argument("--seed", type=int)
    c.set_defaults(fn=cmd_chain_rewrite)

    j = sub.add_parser("judge").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    c = j.add_parser("link")
    c.add_argument("--pair")
    c.add_argument("--before")
    c.add_argument("--after")
    c.set_defaults(fn=cmd_judge_link)
    c = j.add_parser("trace")
    c.add_argument("--blackbox", required=True)
    c.add_argument("--probes", required=True)
    c.add_argument("--mpk", help="public key file (default: state mpk.bin)")
    c.add_argument("--eps", type=float, default=0.5)
    c.add_argument("--trials", type=int, default=1)
    c.add_argument("--seed", type=int)
    c.set_defaults(fn=cmd_judge_trace)
    c = j.add_parser("blackbox", help="bundle users' keys into a blackbox file")
    c.add_argument("--users", required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(fn=cmd_judge_blackbox)

    b = sub.add_parser("bench")
    b.add_argument("op", choices=["keygen", "hash", "adapt", "dpss"])
    b.add_argument("--sizes")
    b.add_argument("--reps", type=int, default=3)
    b.add_argument("--profile", choices=PROFILES)
    b.add_argument("--seed", type=int)
    b.set_defaults(fn=cmd_bench)
    return p


def dispatch(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, NotMutable, codec.CodecError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (DecryptionDenied, RewriteError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(dispatch())
