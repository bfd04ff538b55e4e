#!/usr/bin/env python3
"""How the envy bound, query counts, and iterations scale with delta.

Runs the same seeded batch of instances at several delta values and prints
one table row per delta.  Worst-case envy should track 1/4 + 2*delta/n while
iterations and queries grow roughly like 1/delta.
"""

import argparse
import time
from fractions import Fraction

from cakecut import GeneratorSpec, SolverConfig, generate, solve
from cakecut.generate import FAMILIES

DELTAS = ["1/4", "1/8", "1/16", "1/32", "1/64"]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=40)
    parser.add_argument("--n", type=int, default=6)
    parser.add_argument("--family", default="random", choices=FAMILIES)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--deltas", nargs="*", default=DELTAS)
    args = parser.parse_args()

    instances = [generate(GeneratorSpec(n=args.n, family=args.family,
                                        seed=args.seed + k))
                 for k in range(args.count)]

    print(f"{args.count} instances, n={args.n}, family={args.family}")
    header = (f"{'delta':>8} {'bound':>10} {'worst envy':>12} {'mean evals':>11} "
              f"{'mean cuts':>10} {'mean iters':>11} {'time':>7}")
    print(header)
    print("-" * len(header))
    for text in args.deltas:
        delta = Fraction(text)
        config = SolverConfig(delta=delta, trace_level="off")
        worst = Fraction(0)
        evals = cuts = iters = 0
        started = time.monotonic()
        for instance in instances:
            _, trace, report = solve(instance, config)
            assert report.passed, report.failures()
            worst = max(worst, report.max_envy)
            evals += report.eval_count
            cuts += report.cut_count
            iters += trace.phase1_iterations + trace.phase2_iterations
        elapsed = time.monotonic() - started
        bound = Fraction(1, 4) + 2 * delta / args.n
        print(f"{text:>8} {float(bound):>10.4f} {float(worst):>12.4f} "
              f"{evals / args.count:>11.1f} {cuts / args.count:>10.1f} "
              f"{iters / args.count:>11.1f} {elapsed:>6.1f}s")


if __name__ == "__main__":
    main()
