"""End-to-end walk through the command line in a scratch state directory.

Sets up a chain, shares the master secret, grants two keys across a
handoff, rewrites one transaction per key, then validates, links and traces.
"""

import argparse
import json
import tempfile
from contextlib import redirect_stdout
from io import StringIO
from pathlib import Path

from chainrewrite.cli import dispatch


def step(state, *argv, expect=0):
    buf = StringIO()
    with redirect_stdout(buf):
        code = dispatch(["--dir", str(state), *map(str, argv)])
    for line in buf.getvalue().splitlines():
        print(f"  {line}")
    if code != expect:
        raise SystemExit(f"{' '.join(map(str, argv))}: exit {code}, wanted {expect}")
    return [json.loads(line) for line in buf.getvalue().splitlines()]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--profile", default="mock", choices=["mock", "toy", "production"])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--dir", help="keep the state here instead of a temp directory")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        state = Path(args.dir or tmp) / "state"
        print("setup")
        step(state, "setup", "--k", 6, "--profile", args.profile, "--seed", args.seed, "--difficulty", 6)
        step(state, "committee", "share", "--members", "ann,ben,cat,dan,eve", "--t", 1, "--depth", 2)
        print("grant to alice, mine")
        step(state, "committee", "grant", "--user", "alice", "--policy", "finance OR audit")
        step(state, "tx", "hash", "--user", "carol", "--content", "invoice 17: 120 EUR", "--attrs", "finance")
        step(state, "chain", "mine", "--synthetic", 5, "--attrs", "finance", "--depth", 2)
        print("handoff with a threshold increase, grant to bob")
        step(state, "committee", "handoff", "--members", "ben,cat,dan,eve,fay,gus", "--t", 2, "--depth", 4)
        step(state, "committee", "grant", "--user", "bob", "--policy", "legal")
        step(state, "tx", "hash", "--user", "carol", "--content", "contract draft", "--attrs", "legal")
        step(state, "chain", "mine", "--synthetic", 5, "--attrs", "legal", "--depth", 4)
        print("rewrites")
        a = step(state, "chain", "rewrite", "--locator", "1:1", "--user", "alice", "--content", "invoice 17: 210 EUR")
        step(state, "chain", "rewrite", "--locator", "2:2", "--user", "bob", "--content", "contract final")
        step(state, "chain", "rewrite", "--locator", "2:2", "--user", "alice", "--content", "nope", expect=1)
        print("validate, link, trace")
        step(state, "chain", "validate")
        step(state, "judge", "link", "--pair", a[-1]["pair"])
        bb = state / "box.bb"
        probes = state / "probes.txt"
        probes.write_text("finance\nlegal\n")
        step(state, "judge", "blackbox", "--users", "alice,bob", "--out", bb)
        step(state, "judge", "trace", "--blackbox", bb, "--probes", probes)


if __name__ == "__main__":
    main()
