"""Triple-counting engine behind the Frobenius/trace identities.

c1 counts the distinct rank-<=1 matrices, c3 the ordered triples of such
matrices whose XOR also has rank <= 1. Pairs (R1, R2) split into
"structured" (row sides or column sides not in general position) and
"general" ones; general pairs admit at most 9 valid completions.

The hot loops live in a compiled kernel (_census_c) with a pure-Python
twin (_census_py) selected at import time.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from . import _census_py
from .errors import SizeLimitError
from .f2core import decompose_rank_le1, enumerate_rank_le1, rank_f2
from .problems import count_ones, materialize, rankone_problem

try:
    from . import _census_c as _default_kernel

    KERNEL_NAME = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    _default_kernel = _census_py
    KERNEL_NAME = "python"

MAX_N_NAIVE = 4
MAX_N_FAST = 6


@dataclass(frozen=True)
class TripleCensus:
    n: int
    c1: int
    c3: int
    structured_pairs: int
    general_pairs: int
    structured_triples: int
    general_triples: int

    @property
    def structured_bound(self) -> int:
        """Cap on structured triples: 6 * 3^n * 2^(4n)."""
        return 6 * 3**self.n * 2 ** (4 * self.n)

    @property
    def general_bound(self) -> int:
        """Cap on general-position triples: 9 * 2^(4n)."""
        return 9 * 2 ** (4 * self.n)


def c1_exact(n: int) -> int:
    """Distinct rank-<=1 matrices: (2^n - 1)^2 + 1 (zero matrix included)."""
    return (2**n - 1) ** 2 + 1


def is_general_position(a: int, b: int) -> bool:
    """Sets as bit masks: A\\B, A&B and B\\A all nonempty."""
    return bool(a & ~b) and bool(a & b) and bool(b & ~a)


def count_triples_naive(n: int) -> TripleCensus:
    """Full enumeration over all c1^2 pairs x c1 completions (oracle path)."""
    if n > MAX_N_NAIVE:
        raise SizeLimitError(f"naive census limited to n <= {MAX_N_NAIVE}")
    mats = enumerate_rank_le1(n)
    sides = []
    for m in mats:
        dec = decompose_rank_le1(m)
        sides.append((dec.left, dec.right))
    sp = gp = st = gt = 0
    for r1, (a1, b1) in zip(mats, sides):
        for r2, (a2, b2) in zip(mats, sides):
            d = r1 ^ r2
            v = sum(1 for r3 in mats if rank_f2(d ^ r3) <= 1)
            if is_general_position(a1, a2) and is_general_position(b1, b2):
                gp += 1
                gt += v
            else:
                sp += 1
                st += v
    return TripleCensus(n, len(mats), st + gt, sp, gp, st, gt)


def _profiles(n: int):
    """Size profiles (s1, s2, s3) of the regions A1\\A2, A1&A2, A2\\A1 with
    both A1 and A2 nonempty."""
    for s1 in range(n + 1):
        for s2 in range(n + 1 - s1):
            for s3 in range(n + 1 - s1 - s2):
                if s1 + s2 >= 1 and s2 + s3 >= 1:
                    yield s1, s2, s3


def _multiplicity(n: int, s) -> int:
    s0 = n - sum(s)
    return factorial(n) // (factorial(s[0]) * factorial(s[1]) * factorial(s[2]) * factorial(s0))


def _rep_masks(s) -> tuple[int, int]:
    """Representative sets for a profile: A1 = first s1+s2 bits, A2 the next
    s2+s3 bits overlapping on s2."""
    s1, s2, s3 = s
    a1 = (1 << (s1 + s2)) - 1
    a2 = ((1 << (s1 + s2 + s3)) - 1) ^ ((1 << s1) - 1)
    return a1, a2


def count_triples_fast(n: int, kernel=None) -> TripleCensus:
    """Census via the 9-candidate rule on general pairs and representative
    counting on structured pair classes (classes are closed under row and
    column permutations, so one representative decides the whole class)."""
    if n > MAX_N_FAST:
        raise SizeLimitError(f"fast census limited to n <= {MAX_N_FAST}")
    k = kernel or _default_kernel
    c1 = c1_exact(n)

    general_pairs, general_triples, max_valid = k.general_pair_scan(n)
    if max_valid > 9:
        raise AssertionError(f"general pair admitted {max_valid} > 9 completions")

    structured_triples = 0
    structured_pairs = 0

    # both matrices zero
    structured_pairs += 1
    structured_triples += c1
    # exactly one zero matrix: D is the nonzero one; count by side sizes
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            mult = comb(n, a) * comb(n, b)
            a2 = (1 << a) - 1
            b2 = (1 << b) - 1
            d = [b2 if (a2 >> i) & 1 else 0 for i in range(n)]
            v = k.count_valid_r3(d, n)
            structured_pairs += 2 * mult
            structured_triples += 2 * mult * v
    # both nonzero, structured profiles only
    for s in _profiles(n):
        s_general = s[0] >= 1 and s[1] >= 1 and s[2] >= 1
        for t in _profiles(n):
            if s_general and t[0] >= 1 and t[1] >= 1 and t[2] >= 1:
                continue  # handled by the general scan
            mult = _multiplicity(n, s) * _multiplicity(n, t)
            a1, a2 = _rep_masks(s)
            b1, b2 = _rep_masks(t)
            d = [(b1 if (a1 >> i) & 1 else 0) ^ (b2 if (a2 >> i) & 1 else 0) for i in range(n)]
            v = k.count_valid_r3(d, n)
            structured_pairs += mult
            structured_triples += mult * v

    if structured_pairs + general_pairs != c1 * c1:
        raise AssertionError("pair classification does not partition all pairs")
    return TripleCensus(n, c1, structured_triples + general_triples,
                        structured_pairs, general_pairs,
                        structured_triples, general_triples)


def holder_bound(n: int, census: TripleCensus | None = None) -> float:
    """Lower bound on gamma_2 of the rank-one problem: c1^(3/2) / sqrt(c3).

    Substituting |M|_F^2 = N*c1 and tr((M^T M)^2) = N*c3 into the
    Frobenius-over-trace bound cancels every factor of N.
    """
    census = census or count_triples_fast(n)
    return census.c1**1.5 / census.c3**0.5


def direct_trace_check(n: int, census: TripleCensus | None = None) -> bool:
    """Exact integer cross-check of both counting identities at N = 2^(n^2)."""
    if n > 3:
        raise SizeLimitError("direct check materializes N = 2^(n^2); n <= 3 only")
    census = census or count_triples_fast(n)
    mat = materialize(rankone_problem(n))
    N = mat.N
    m = mat.bits.astype(np.int64)
    g = m.T @ m
    trace = int((g * g).sum())  # tr(G^2) with G symmetric
    return count_ones(mat) == N * census.c1 and trace == N * census.c3
