"""Benchmark the compiled enumeration kernels against the pure fallback.

Runs the three kernel entry points and two end-to-end pipelines on growing
inputs with both backends and prints a timing table.  Results are asserted
equal between backends before timings are reported.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import statistics
import time
from fractions import Fraction

import numpy as np

from ncdet_lab import kernels, kernels_py
from ncdet_lab.algebra import PrimeField, RationalField
from ncdet_lab.determinants import commutative_perm, ham_count
from ncdet_lab.determinants import Digraph
from ncdet_lab.reductions import hamcycles_via_moore, perm_via_cayley


def backends():
    pairs = [("pure", kernels_py)]
    try:
        from ncdet_lab import _kernels

        pairs.insert(0, ("compiled", _kernels))
    except ImportError:
        pass
    return pairs


def time_call(fn, repeat: int) -> float:
    samples = []
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - started)
    return statistics.median(samples)


def bench_kernel_calls(repeat: int):
    rng = random.Random(42)
    rows = []
    for n, size, mod in ((5, 13, 0), (6, 13, 101), (7, 13, 101)):
        entries = np.array(
            [
                [
                    [[rng.randrange(mod or 7) for _ in range(size)] for _ in range(size)]
                    for _ in range(n)
                ]
                for _ in range(n)
            ],
            dtype=np.int64,
        )
        order = np.arange(n, dtype=np.int64)
        reference = None
        timings = {}
        for name, impl in backends():
            result = impl.perm_enum_sum(entries, order, mod, True)
            if reference is None:
                reference = result
            else:
                assert (result == reference).all(), "backends disagree"
            timings[name] = time_call(
                lambda impl=impl: impl.perm_enum_sum(entries, order, mod, True), repeat
            )
        rows.append((f"perm_enum_sum n={n} S={size} mod={mod}", timings))
    return rows


def bench_pipelines(repeat: int):
    rng = random.Random(43)
    rows = []

    n = 4
    matrix = [[Fraction(rng.randint(-9, 9)) for _ in range(n)] for _ in range(n)]
    expected = commutative_perm(matrix)
    assert perm_via_cayley(matrix, RationalField()) == expected
    rows.append(
        (
            f"perm_via_cayley n={n} over Q",
            {"selected": time_call(lambda: perm_via_cayley(matrix, RationalField()), repeat)},
        )
    )

    field = PrimeField(101)
    fp_matrix = [[field.from_int(rng.randrange(101)) for _ in range(n)] for _ in range(n)]
    assert perm_via_cayley(fp_matrix, field) == commutative_perm(fp_matrix)
    rows.append(
        (
            f"perm_via_cayley n={n} over F_101",
            {"selected": time_call(lambda: perm_via_cayley(fp_matrix, field), repeat)},
        )
    )

    g = Digraph.from_arcs(
        6,
        [
            (i, j)
            for i in range(1, 7)
            for j in range(1, 7)
            if i != j and rng.random() < 0.6
        ],
    )
    assert hamcycles_via_moore(g, RationalField()) == ham_count(g)
    rows.append(
        (
            "hamcycles_via_moore n=6 over Q",
            {"selected": time_call(lambda: hamcycles_via_moore(g, RationalField()), repeat)},
        )
    )
    return rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    names = [name for name, _ in backends()]
    print(f"backends available: {', '.join(names)}")
    print(f"selected backend: {kernels.backend_name()}")
    print()
    print(f"{'case':<42} " + " ".join(f"{n:>12}" for n in names))
    for case, timings in bench_kernel_calls(args.repeat):
        cells = " ".join(
            f"{timings.get(n, float('nan')) * 1000:>10.2f}ms" for n in names
        )
        print(f"{case:<42} {cells}")
    print()
    print("pipelines (selected backend, checked against oracles):")
    for case, timings in bench_pipelines(args.repeat):
        print(f"{case:<42} {timings['selected'] * 1000:>10.2f}ms")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
