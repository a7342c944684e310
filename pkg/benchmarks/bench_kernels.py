#!/usr/bin/env python3
"""Benchmark the compiled clue-scoring kernel against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--reps 200]

The workload mirrors a real giver turn: one similarity matrix of
clue_vocab_size x unrevealed words, scored in full. Also times a complete
game on the synthetic trap lexicon under both backends.
"""

import argparse
import statistics
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from duetbench import kernels
from duetbench.kernels import _python


def time_fn(fn, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def bench_pair_scores(reps):
    rng = np.random.default_rng(0)
    sims = rng.uniform(-1, 1, size=(2000, 25))
    roles = np.array([0] * 9 + [1] * 3 + [2] * 13, dtype=np.int8)

    rows = []
    if kernels.BACKEND == "compiled":
        from duetbench.kernels import _core

        best, med = time_fn(lambda: _core.pair_scores(sims, roles, 0.1), reps)
        rows.append(("compiled", best, med))
    best, med = time_fn(lambda: _python.pair_scores(sims, roles, 0.1), reps)
    rows.append(("numpy", best, med))

    print(f"pair_scores on 2000x25, {reps} reps:")
    for name, best, med in rows:
        print(f"  {name:>8}: best {best * 1e6:8.1f} us   median {med * 1e6:8.1f} us")
    if len(rows) == 2:
        print(f"  speedup (median): {rows[1][2] / rows[0][2]:.2f}x")
    print()


def bench_full_game(reps):
    import synthetic
    from duetbench.agents import EmbeddingGuesser, Listener, RsaGiver
    from duetbench.harness import run_game

    table = synthetic.trap_lexicon()
    listener = Listener(table)
    board = synthetic.trap_board(0)

    def play():
        giver = RsaGiver(listener, board)
        run_game(giver, EmbeddingGuesser(listener), board)

    best, med = time_fn(play, max(3, reps // 20))
    print(f"full trap-board game ({kernels.BACKEND} backend):")
    print(f"  best {best * 1e3:.2f} ms   median {med * 1e3:.2f} ms")
    print()
    print("run with DUETBENCH_KERNELS=python to benchmark the fallback end to end")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--reps", type=int, default=200)
    args = parser.parse_args()
    print(f"active backend: {kernels.BACKEND}\n")
    bench_pair_scores(args.reps)
    bench_full_game(args.reps)


if __name__ == "__main__":
    main()
