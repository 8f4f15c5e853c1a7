"""Time the compiled and pure-Python ascent kernels on the same inputs.

    python benchmarks/bench_ascent.py [--repeat 5] [--seed 0]

Both kernels must return identical choices; the script aborts otherwise.
"""
import argparse
import time

import numpy as np

from plankcover import _ascent_py

try:
    from plankcover import _ascent as _ascent_cy
except ImportError:
    _ascent_cy = None

SIZES = [(10, 2, 4), (50, 3, 6), (200, 4, 8), (500, 6, 10)]


def make_case(rng, n, d, m):
    sizes = rng.integers(2, m + 1, n)
    blocks = []
    for s in sizes:
        W = rng.normal(size=(s - 1, 2 * d))
        W = np.vstack([W, -(rng.uniform(0.2, 1.0, s - 1) @ W)])
        blocks.append(W)
    W = np.vstack(blocks)
    offsets = np.zeros(n + 1, dtype=np.intp)
    offsets[1:] = np.cumsum(sizes)
    eu = np.ascontiguousarray(W[:, :d])
    ev = np.ascontiguousarray(W[:, d:])
    return eu, ev, offsets, rng.normal(size=(n, d)), rng.normal(size=(n, d)), np.zeros(n, dtype=np.intp)


def best_time(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    prs = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    prs.add_argument("--repeat", type=int, default=5)
    prs.add_argument("--seed", type=int, default=0)
    args = prs.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>5} {'d':>3} {'|W|<=':>6} {'swaps':>6} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for n, d, m in SIZES:
        case = make_case(rng, n, d, m)
        tp, (cp, moves) = best_time(_ascent_py.ascend, case, args.repeat)
        if _ascent_cy is None:
            print(f"{n:>5} {d:>3} {m:>6} {len(moves):>6} {1e3 * tp:>10.2f} {'n/a':>10} {'n/a':>8}")
            continue
        tc, (cc, _) = best_time(_ascent_cy.ascend, case, args.repeat)
        if not np.array_equal(np.asarray(cp), np.asarray(cc)):
            raise SystemExit(f"kernels disagree on n={n}, d={d}")
        print(f"{n:>5} {d:>3} {m:>6} {len(moves):>6} {1e3 * tp:>10.2f} {1e3 * tc:>10.2f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
