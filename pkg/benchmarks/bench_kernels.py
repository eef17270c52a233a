"""Benchmark the numba kernels against the pure-numpy fallback.

Times characteristic-function sampling over large z-grids, which is the
workload the jitted kernels exist for (per-point series sums and leave-one-out
sine products). Includes warmup so JIT compilation never lands inside a timed
section.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --points 200000 --order 24 --repeats 5
"""

import argparse
import time

import numpy as np

import frozenstar as fs
from frozenstar.solution import ModelConfig


def build_config(edges: int, order: int) -> ModelConfig:
    rng = np.random.default_rng(0)
    lengths = rng.uniform(0.7, 1.4, edges)
    w = rng.uniform(0.8, 1.2, edges)
    graph = fs.StarGraphSpec(lengths, 2 * np.pi * w / w.sum())
    coef = 0.3 * (rng.normal(size=(edges, order)) + 1j * rng.normal(size=(edges, order)))
    return ModelConfig(graph, fs.chords_from_angles(graph), fs.PotentialCoeffs(lengths, coef))


def time_backend(name: str, cfg: ModelConfig, grid: np.ndarray, repeats: int) -> float:
    fs.set_backend(name)
    fs.phi(cfg, grid[:64])  # warmup: JIT compile / cache load
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fs.phi(cfg, grid)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--points", type=int, default=100_000, help="z-grid size")
    parser.add_argument("--order", type=int, default=16, help="series truncation order")
    parser.add_argument("--edges", type=int, default=4, help="edge count")
    parser.add_argument("--repeats", type=int, default=3, help="timing repeats (best taken)")
    args = parser.parse_args()

    cfg = build_config(args.edges, args.order)
    grid = np.linspace(0.31, 40.0, args.points) + 0.2j

    print(f"characteristic-function sampling: {args.points} points, "
          f"{args.edges} edges, order {args.order}")
    print("-" * 60)
    results = {}
    for name in ("numpy", "numba"):
        try:
            results[name] = time_backend(name, cfg, grid, args.repeats)
        except ImportError:
            print(f"{name:>6}: not available")
            continue
        rate = args.points / results[name]
        print(f"{name:>6}: {results[name]*1e3:9.1f} ms   ({rate/1e6:.2f} M samples/s)")
    if len(results) == 2:
        print(f"speedup: {results['numpy'] / results['numba']:.2f}x (numba over numpy)")

    fs.set_backend("numpy")
    a = fs.phi(cfg, grid[:512])
    fs.set_backend("numba")
    b = fs.phi(cfg, grid[:512])
    rel = float(np.max(np.abs(a - b)) / np.max(np.abs(a)))
    print(f"cross-backend agreement on 512 samples: {rel:.2e} relative")


if __name__ == "__main__":
    main()
