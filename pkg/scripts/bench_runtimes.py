"""Runtime scaling table: keygen/hash/adapt against size, handoff against t.

Prints one row per measurement and the fit statistics used in the
acceptance suite (least-squares R^2 for the linear ops, log-log slope for
the handoff).
"""

import argparse

from chainrewrite.bench import Bench, linear_fit, loglog_slope


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--profile", default="production", choices=["mock", "toy", "production"])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--sizes", default="10,20,30,40,50,60,70,80,90,100")
    ap.add_argument("--thresholds", default="1,2,3,4,5")
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(x) for x in args.sizes.split(",")]
    ts = [int(x) for x in args.thresholds.split(",")]
    bench = Bench(args.profile, seed=args.seed)

    print(f"{'op':<8}{'size':>6}{'seconds':>12}")
    for op in ("keygen", "hash", "adapt"):
        ys = []
        for n in sizes:
            p = bench.run(op, n, args.reps)
            ys.append(p.seconds)
            print(f"{op:<8}{n:>6}{p.seconds:>12.4f}")
        slope, intercept, r2 = linear_fit(sizes, ys)
        print(f"{op:<8} slope={slope:.5f}s/attr intercept={intercept:.4f}s R^2={r2:.4f}")
    ys = []
    for t in ts:
        p = bench.dpss(t, 1)
        ys.append(p.seconds)
        print(f"{'dpss':<8}{t:>6}{p.seconds:>12.4f}")
    print(f"dpss     log-log slope={loglog_slope(ts, ys):.2f}")


if __name__ == "__main__":
    main()
