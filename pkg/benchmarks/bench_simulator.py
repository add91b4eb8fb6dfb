"""Compare the numba and numpy tender-histogram kernels.

    python3 benchmarks/bench_simulator.py --trials 1000000 --n 1 5 25
"""

import argparse
import time

import numpy as np

from toehold.model import Strategy
from toehold.simulator import SimConfig, tender_histogram
from toehold.simulator import _kernels


def best_of(fn, repeats):
    times = []
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1_000_000)
    ap.add_argument("--n", type=int, nargs="+", default=[1, 5, 25])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    if "numba" in backends:
        t0 = time.perf_counter()
        tender_histogram(SimConfig(1, Strategy.NO_TOEHOLD, 10, 0), backend="numba")
        print(f"numba warm-up (compile or cache load): {time.perf_counter() - t0:.3f}s")
    else:
        print("numba unavailable or disabled; timing numpy only")

    print(f"{'n':>4} {'backend':>7} {'seconds':>9} {'Mtrial/s':>9}")
    for n in args.n:
        config = SimConfig(n, Strategy.NO_TOEHOLD, args.trials, 42)
        hists = {}
        for b in backends:
            secs, hists[b] = best_of(lambda: tender_histogram(config, workers=args.workers, backend=b), args.repeats)
            print(f"{n:>4} {b:>7} {secs:>9.4f} {args.trials / secs / 1e6:>9.2f}")
        if len(hists) == 2 and not np.array_equal(hists["numba"], hists["numpy"]):
            raise SystemExit(f"backends disagree at n={n}")
    print("histograms identical across backends" if len(backends) == 2 else "")


if __name__ == "__main__":
    main()
