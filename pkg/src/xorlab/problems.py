"""Communication problems as predicates over structured inputs.

A problem is an N x N boolean matrix given implicitly by a predicate on
index pairs, with an encoder mapping raw indices to structured inputs
(F2 matrices, bit strings, integers). Tiny instances can be materialized
to an explicit BoolMatrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContractError, SizeLimitError
from .f2core import F2Matrix, rank_le1

MAX_MATERIALIZE = 1 << 10


@dataclass(frozen=True)
class BoolMatrix:
    """An explicit N x N 0/1 matrix (numpy uint8)."""

    N: int
    bits: np.ndarray

    def __post_init__(self):
        if self.N > MAX_MATERIALIZE:
            raise SizeLimitError(f"BoolMatrix limited to N <= {MAX_MATERIALIZE}")
        if self.bits.shape != (self.N, self.N):
            raise ContractError("bits shape does not match N")

    def __eq__(self, other):
        return isinstance(other, BoolMatrix) and self.N == other.N and np.array_equal(self.bits, other.bits)

    def to_text(self) -> str:
        lines = [f"{self.N} {self.N}"]
        for i in range(self.N):
            lines.append("".join(str(int(b)) for b in self.bits[i]))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "BoolMatrix":
        m = F2Matrix.from_text(text)
        if m.n_rows != m.n_cols:
            raise ContractError("BoolMatrix must be square")
        bits = np.zeros((m.n_rows, m.n_cols), dtype=np.uint8)
        for i in range(m.n_rows):
            for j in range(m.n_cols):
                bits[i, j] = m.get(i, j)
        return BoolMatrix(m.n_rows, bits)

    @staticmethod
    def identity(N: int) -> "BoolMatrix":
        return BoolMatrix(N, np.eye(N, dtype=np.uint8))

    @staticmethod
    def ones(N: int) -> "BoolMatrix":
        return BoolMatrix(N, np.ones((N, N), dtype=np.uint8))


@dataclass(frozen=True)
class CommProblem:
    """N x N communication problem given by a total predicate on [N] x [N]."""

    name: str
    row_domain_size: int
    col_domain_size: int
    predicate: Callable[[int, int], int]
    encoder: Callable[[int], object] = field(default=lambda i: i)


@dataclass(frozen=True)
class XorProblem:
    """XOR problem F(x, y) = inner_fn(x ^ y) on m-bit inputs."""

    name: str
    m: int
    inner_fn: Callable[[int], int]

    @property
    def N(self) -> int:
        return 1 << self.m

    def predicate(self, x: int, y: int) -> int:
        return self.inner_fn(x ^ y)


def rankone_problem(n: int) -> XorProblem:
    """RankOne_n as an XOR problem on m = n^2 variables.

    inner_fn(x) treats x as a bit-packed n x n matrix (row-major) and is 1
    iff its F2 rank is at most 1.
    """
    if not 1 <= n <= 6:
        raise SizeLimitError(f"rankone_problem supports 1 <= n <= 6, got {n}")

    def inner(x: int, _n=n) -> int:
        return 1 if rank_le1(F2Matrix.from_int(x, _n, _n)) else 0

    return XorProblem(name=f"rankone:{n}", m=n * n, inner_fn=inner)


def rankone_symmetries(n: int) -> list[tuple[int, ...]]:
    """Bit-position permutations preserving rank: row/column permutations
    and transposition of the packed n x n matrix (position of entry (i, j)
    is i*n + j)."""

    def from_entry_map(g) -> tuple[int, ...]:
        return tuple(g(k // n, k % n) for k in range(n * n))

    gens = [from_entry_map(lambda i, j: j * n + i)]  # transpose
    if n >= 2:
        swap = lambda v: {0: 1, 1: 0}.get(v, v)
        cyc = lambda v: (v + 1) % n
        gens.append(from_entry_map(lambda i, j: swap(i) * n + j))
        gens.append(from_entry_map(lambda i, j: cyc(i) * n + j))
        gens.append(from_entry_map(lambda i, j: i * n + swap(j)))
        gens.append(from_entry_map(lambda i, j: i * n + cyc(j)))
    return gens


def equality_problem(N: int) -> CommProblem:
    return CommProblem(name=f"eq:{N}", row_domain_size=N, col_domain_size=N,
                       predicate=lambda x, y: 1 if x == y else 0)


def gt_problem(n_bits: int) -> CommProblem:
    """Greater-Than on n-bit unsigned integers."""
    N = 1 << n_bits
    return CommProblem(name=f"gt:{n_bits}", row_domain_size=N, col_domain_size=N,
                       predicate=lambda x, y: 1 if x > y else 0)


def hd1_problem(n_bits: int) -> XorProblem:
    """1-Hamming-Distance on n-bit strings (an XOR problem: popcount <= 1)."""
    return XorProblem(name=f"hd1:{n_bits}", m=n_bits,
                      inner_fn=lambda z: 1 if bin(z).count("1") <= 1 else 0)


def parse_problem(spec: str):
    """Resolve a CLI identifier like 'rankone:2', 'eq:16', 'gt:4', 'hd1:8'."""
    kind, _, arg = spec.partition(":")
    if not arg:
        raise ContractError(f"problem spec needs a parameter: {spec!r}")
    k = int(arg)
    if kind == "rankone":
        return rankone_problem(k)
    if kind == "eq":
        return equality_problem(k)
    if kind == "gt":
        return gt_problem(k)
    if kind == "hd1":
        return hd1_problem(k)
    raise ContractError(f"unknown problem kind: {kind!r}")


def materialize(p) -> BoolMatrix:
    """Evaluate the predicate on all pairs. Guarded to N <= 2^10."""
    if isinstance(p, XorProblem):
        N = p.N
        if N > MAX_MATERIALIZE:
            raise SizeLimitError(f"cannot materialize N = {N} > {MAX_MATERIALIZE}")
        inner = np.array([p.inner_fn(z) for z in range(N)], dtype=np.uint8)
        idx = np.arange(N)
        return BoolMatrix(N, inner[idx[:, None] ^ idx[None, :]])
    if isinstance(p, CommProblem):
        N = p.row_domain_size
        if N != p.col_domain_size:
            raise ContractError("materialize requires a square problem")
        if N > MAX_MATERIALIZE:
            raise SizeLimitError(f"cannot materialize N = {N} > {MAX_MATERIALIZE}")
        bits = np.fromfunction(np.vectorize(p.predicate, otypes=[np.uint8]), (N, N), dtype=int)
        return BoolMatrix(N, bits.astype(np.uint8))
    raise ContractError(f"cannot materialize {type(p).__name__}")


def count_ones(m: BoolMatrix) -> int:
    return int(m.bits.sum())


def row_ones(m: BoolMatrix, x: int) -> int:
    return int(m.bits[x].sum())
