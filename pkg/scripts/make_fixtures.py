"""Build the demo state directory, blackbox and probe file under tests/fixtures.

Two committees grant keys: one at index depth 2 (policy "finance") and,
after a handoff, one at depth 5 (policy "legal"). The blackbox holds both
keys, so tracing with one probe per policy accuses depths 2 and 5.
"""

import argparse
import shutil
import sys
from pathlib import Path

from chainrewrite.cli import dispatch


def run(*argv):
    code = dispatch([str(a) for a in argv])
    if code != 0:
        sys.exit(f"command failed ({code}): {' '.join(map(str, argv))}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests" / "fixtures"))
    ap.add_argument("--profile", default="mock")
    args = ap.parse_args()
    out = Path(args.out)
    state = out / "demo"
    if state.exists():
        shutil.rmtree(state)
    out.mkdir(parents=True, exist_ok=True)
    d = ("--dir", state)

    run(*d, "setup", "--k", 8, "--profile", args.profile, "--seed", 11, "--difficulty", 8)
    run(*d, "committee", "share", "--members", "ann,ben,cat,dan,eve", "--t", 1, "--depth", 2)
    run(*d, "committee", "grant", "--user", "alice", "--policy", "finance")
    run(*d, "tx", "hash", "--user", "carol", "--content", "invoice 17: 120 EUR", "--attrs", "finance")
    run(*d, "chain", "mine", "--synthetic", 9, "--attrs", "finance", "--depth", 2)
    run(*d, "committee", "handoff", "--members", "ben,cat,dan,eve,fay,gus", "--t", 2, "--depth", 5)
    run(*d, "committee", "grant", "--user", "bob", "--policy", "legal OR (audit AND court)")
    run(*d, "tx", "hash", "--user", "carol", "--content", "contract draft", "--attrs", "legal")
    run(*d, "chain", "mine", "--synthetic", 9, "--attrs", "legal", "--depth", 5)
    run(*d, "chain", "rewrite", "--locator", "1:1", "--user", "alice", "--content", "invoice 17: 210 EUR")
    run(*d, "chain", "rewrite", "--locator", "2:2", "--user", "bob", "--content", "contract final")
    run(*d, "judge", "blackbox", "--users", "alice,bob", "--out", out / "demo.bb")
    (out / "probes.txt").write_text("# one attribute set per line\nfinance\nlegal\n")


if __name__ == "__main__":
    main()
