"""Runtime scaling measurements for key generation, hashing, adapting and handoff."""

from __future__ import annotations

import math
import random
import statistics
import time
from dataclasses import dataclass

from .abet import abet_keygen, abet_setup
from .algebra.groups import get_suite
from .dpss import Committee, CommitteeConfig
from .kzg import kzg_setup
from .rewrite import fw_adapt, fw_hash
from .sigma import sig_keygen


@dataclass
class BenchPoint:
    op: str
    size: int
    seconds: float


def _min_time(fn, reps: int) -> float:
    best = math.inf
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _labels(n: int) -> list[str]:
    return [f"attr{i:03d}" for i in range(n)]


def and_policy(n: int) -> str:
    return " AND ".join(_labels(n))


class Bench:
    def __init__(self, profile: str = "mock", seed: int = 0, k: int = 3):
        self.suite = get_suite(profile)
        self.rng = random.Random(seed)
        self.master = abet_setup(self.suite, k, self.rng)
        self.mpk = self.master.mpk
        self.author = sig_keygen(self.suite, self.rng)
        self.modifier = sig_keygen(self.suite, self.rng)

    def keygen(self, size: int, reps: int = 3) -> BenchPoint:
        pol = and_policy(size)
        idx = self.mpk.index(1)
        return BenchPoint("keygen", size, _min_time(lambda: abet_keygen(self.master, pol, idx, self.rng), reps))

    def hash(self, size: int, reps: int = 3) -> BenchPoint:
        attrs = _labels(size)
        idx = self.mpk.index(1)
        t = _min_time(lambda: fw_hash(self.mpk, self.author, b"payload", attrs, idx, self.rng), reps)
        return BenchPoint("hash", size, t)

    def adapt(self, size: int, reps: int = 3) -> BenchPoint:
        attrs = _labels(size)
        idx = self.mpk.index(1)
        key = abet_keygen(self.master, and_policy(size), idx, self.rng)
        tx = fw_hash(self.mpk, self.author, b"payload", attrs, idx, self.rng)
        t = _min_time(lambda: fw_adapt(self.mpk, key, self.modifier, tx, b"edited", self.rng), reps)
        return BenchPoint("adapt", size, t)

    def dpss(self, t: int, reps: int = 1) -> BenchPoint:
        """One handoff between two disjoint committees of 2t+1 members."""
        _, params = kzg_setup(self.suite, 2 * t, self.rng)
        n = 2 * t + 1
        old = CommitteeConfig(tuple(f"old{i:02d}" for i in range(n)), t)
        new = CommitteeConfig(tuple(f"new{i:02d}" for i in range(n)), t, epoch=1)
        secrets_ = {"alpha": self.master.alpha, "theta": self.master.theta}

        def run():
            c = Committee.bootstrap(params, old, secrets_, self.rng)
            start = time.perf_counter()
            c.handoff(new, self.rng)
            return time.perf_counter() - start

        return BenchPoint("dpss", t, min(run() for _ in range(reps)))

    def run(self, op: str, size: int, reps: int = 3) -> BenchPoint:
        return getattr(self, op)(size, reps)


def linear_fit(xs, ys):
    """``(slope, intercept, r_squared)`` of an ordinary least-squares line."""
    slope, intercept = statistics.linear_regression(xs, ys)
    r = statistics.correlation(xs, ys)
    return slope, intercept, r * r


def loglog_slope(xs, ys) -> float:
    return statistics.linear_regression([math.log(x) for x in xs], [math.log(y) for y in ys])[0]
