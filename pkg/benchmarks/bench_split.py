"""Benchmark the compiled split-scan kernel against the numpy fallback.

Times the raw kernel on sorted columns of various sizes and a full forest fit
with each kernel, and verifies along the way that both produce identical
results.

Usage: python3 benchmarks/bench_split.py [--repeats N] [--trees N]
"""

import argparse
import time

import numpy as np

import frugalas.forest as forest_mod
from frugalas._split_py import scan_split as pure_scan
from frugalas.forest import ForestConfig, fit_forest

try:
    from frugalas._split import scan_split as compiled_scan
except ImportError:
    compiled_scan = None


def time_kernel(scan, columns, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for values, labels in columns:
            scan(values, labels)
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernel(repeats):
    rng = np.random.default_rng(0)
    print(f"{'n':>8} {'pure (µs)':>12} {'compiled (µs)':>14} {'speedup':>8}")
    for n in (32, 256, 2048, 16384):
        columns = []
        for _ in range(50):
            values = np.sort(rng.uniform(-5, 5, size=n))
            labels = rng.integers(0, 2, size=n).astype(np.int64)
            columns.append((np.ascontiguousarray(values), labels))
        for values, labels in columns:
            assert compiled_scan(values, labels) == pure_scan(values, labels)
        t_pure = time_kernel(pure_scan, columns, repeats) / len(columns)
        t_comp = time_kernel(compiled_scan, columns, repeats) / len(columns)
        print(
            f"{n:>8} {t_pure * 1e6:>12.1f} {t_comp * 1e6:>14.1f} "
            f"{t_pure / t_comp:>7.1f}x"
        )


def bench_forest(n_trees, repeats):
    rng = np.random.default_rng(1)
    X = rng.uniform(size=(500, 12))
    y = (X[:, 0] + 0.3 * rng.normal(size=500) > 0.5).astype(int)
    probe = rng.uniform(size=(100, 12))
    config = ForestConfig(n_trees=n_trees, seed=0)

    results = {}
    original = forest_mod._scan_split
    try:
        for name, scan in (("compiled", compiled_scan), ("pure", pure_scan)):
            forest_mod._scan_split = scan
            best = float("inf")
            for _ in range(repeats):
                start = time.perf_counter()
                fitted = fit_forest(X, y, config)
                best = min(best, time.perf_counter() - start)
            results[name] = (best, fitted.predict_proba(probe))
    finally:
        forest_mod._scan_split = original

    assert np.array_equal(results["compiled"][1], results["pure"][1])
    t_comp, t_pure = results["compiled"][0], results["pure"][0]
    print(f"\nforest fit ({n_trees} trees, 500x12):")
    print(f"  pure      {t_pure * 1e3:8.1f} ms")
    print(f"  compiled  {t_comp * 1e3:8.1f} ms")
    print(f"  speedup   {t_pure / t_comp:8.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--trees", type=int, default=20)
    args = parser.parse_args()

    if compiled_scan is None:
        parser.exit(1, "compiled extension not built; nothing to compare\n")
    print(f"active kernel at import: {forest_mod.KERNEL_IMPL}\n")
    bench_kernel(args.repeats)
    bench_forest(args.trees, args.repeats)


if __name__ == "__main__":
    main()
