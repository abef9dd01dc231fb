"""Compare the compiled enumeration kernels against the pure fallback.

Usage:  python3 benchmarks/bench_kernels.py [--events N] [--repeat K]

Times the two hot kernels (configuration enumeration for both structure
kinds) on seeded random inputs and prints one row per size.  The pure
implementation is always available; the compiled one is skipped with a
note when the extension was not built.
"""

from __future__ import annotations

import argparse
import random
import time

from eventstruct import kernels


def random_prime_input(rng: random.Random, n: int):
    causes = [0] * n
    confl = [0] * n
    for j in range(n):
        for i in range(j):
            if rng.random() < 0.15:
                causes[j] |= 1 << i
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.1:
                confl[i] |= 1 << j
                confl[j] |= 1 << i
    return causes, confl


def random_stable_input(rng: random.Random, n: int):
    forb = []
    for _ in range(n // 2):
        a, b = rng.sample(range(n), 2)
        forb.append(1 << a | 1 << b)
    prem = []
    for i in range(n):
        ps = []
        for _ in range(rng.randint(1, 2)):
            mask = 0
            for j in range(i):
                if rng.random() < 0.2:
                    mask |= 1 << j
            ps.append(mask)
        prem.append(ps)
    return forb, prem


def time_call(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--events", type=int, default=18)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    pure = kernels.load_pure()
    compiled = kernels.load_compiled()
    rng = random.Random(90125)

    print(f"active kernel: {kernels.IMPLEMENTATION}")
    if compiled is None:
        print("compiled extension not built; showing pure timings only")
    header = f"{'kernel':<22}{'n':>4}{'pure (s)':>12}"
    if compiled is not None:
        header += f"{'cython (s)':>12}{'speedup':>9}"
    print(header)

    for n in range(12, args.events + 1, 2):
        causes, confl = random_prime_input(rng, n)
        tp = time_call(pure.prime_configurations, n, causes, confl, repeat=args.repeat)
        row = f"{'prime_configurations':<22}{n:>4}{tp:>12.4f}"
        if compiled is not None:
            tc = time_call(
                compiled.prime_configurations, n, causes, confl, repeat=args.repeat
            )
            assert pure.prime_configurations(n, causes, confl) == (
                compiled.prime_configurations(n, causes, confl)
            )
            row += f"{tc:>12.4f}{tp / tc:>8.1f}x"
        print(row)

        forb, prem = random_stable_input(rng, n)
        tp = time_call(pure.stable_configurations, n, forb, prem, repeat=args.repeat)
        row = f"{'stable_configurations':<22}{n:>4}{tp:>12.4f}"
        if compiled is not None:
            tc = time_call(
                compiled.stable_configurations, n, forb, prem, repeat=args.repeat
            )
            assert pure.stable_configurations(n, forb, prem) == (
                compiled.stable_configurations(n, forb, prem)
            )
            row += f"{tc:>12.4f}{tp / tc:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
