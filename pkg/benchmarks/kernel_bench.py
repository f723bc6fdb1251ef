"""Throughput comparison of the available simulation kernels.

Runs the same pre-generated random block through every importable kernel,
checks the outputs agree bit for bit, and reports realizations per second.

    python3 benchmarks/kernel_bench.py [--n 100000] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from foragedp import EnvParams, REWARDMAX, solve_policy
from foragedp._kernels import available_kernels
from foragedp.beliefs import evidence_increment
from foragedp.simulate import random_block


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--n", type=int, default=100_000, help="realizations per timing run")
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions (best is reported)")
    parser.add_argument("--seed", type=int, default=20260825)
    args = parser.parse_args()

    env = EnvParams(epsilon=0.15, q=0.8)
    table = solve_policy(REWARDMAX, env)
    block = random_block(args.seed, args.n, env.budget_n)
    kernel_args = (
        env.epsilon,
        env.q,
        env.h,
        env.r_plus,
        env.r_minus,
        env.tau_d,
        env.tau_s,
        env.budget_n,
        evidence_increment(env.h),
    )

    outputs = {}
    for name, mod in sorted(available_kernels().items()):
        best = float("inf")
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            out = mod.run_summaries(table.action, table.y_mids, block, *kernel_args)
            best = min(best, time.perf_counter() - t0)
        outputs[name] = out
        print(f"{name:>8}: {args.n / best:>12,.0f} realizations/s  ({best * 1e3:.1f} ms)")

    names = sorted(outputs)
    for other in names[1:]:
        same = np.array_equal(outputs[names[0]], outputs[other])
        print(f"bit-identical {names[0]} vs {other}: {same}")


if __name__ == "__main__":
    main()
