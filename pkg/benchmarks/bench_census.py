"""Benchmark the compiled census kernel against the pure-Python twin.

Usage: python3 benchmarks/bench_census.py [max_n]
"""

import sys
import time

from xorlab import _census_py, counting

try:
    from xorlab import _census_c
except ImportError:
    _census_c = None


def bench(kernel, n: int) -> tuple[float, object]:
    t0 = time.perf_counter()
    census = counting.count_triples_fast(n, kernel=kernel)
    return time.perf_counter() - t0, census


def main():
    max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    print(f"{'n':>3} {'python (s)':>12} {'compiled (s)':>12} {'speedup':>9}")
    for n in range(2, max_n + 1):
        t_py, c_py = bench(_census_py, n)
        if _census_c is None:
            print(f"{n:>3} {t_py:>12.3f} {'-':>12} {'-':>9}")
            continue
        t_c, c_c = bench(_census_c, n)
        assert c_py == c_c, f"kernel mismatch at n={n}"
        print(f"{n:>3} {t_py:>12.3f} {t_c:>12.3f} {t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
