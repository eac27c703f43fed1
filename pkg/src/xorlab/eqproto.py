"""Equality-oracle protocols.

Deterministic protocols are query trees whose inner nodes compare a label
computed from the row input against a label computed from the column input
(each such query matrix is blocky). Non-deterministic protocols are unions
of 2^m trees of depth <= d, cost m + d.

Cost model: we count oracle queries only; the single-bit oracle answers are
not charged separately (both figures appear in CLI reports).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log2
from typing import Callable

import numpy as np

from .errors import ContractError
from .f2core import F2Matrix, rank_le1
from .problems import BoolMatrix


@dataclass(frozen=True)
class EqQuery:
    """answer(x, y) = 1 iff row_label(x) == col_label(y); labels unbounded."""

    row_label: Callable[[int], object]
    col_label: Callable[[int], object]

    def answer(self, x: int, y: int) -> int:
        return 1 if self.row_label(x) == self.col_label(y) else 0


def query_from_blocky(b) -> EqQuery:
    """Equality query realizing a label-encoded blocky matrix.

    Zero-labeled rows and columns get sentinel labels that can never match.
    """
    rl = tuple(b.row_label)
    cl = tuple(b.col_label)

    def row(x: int):
        return rl[x] if rl[x] != 0 else -(2 * x + 2)

    def col(y: int):
        return cl[y] if cl[y] != 0 else -(2 * y + 3)

    return EqQuery(row, col)


@dataclass(frozen=True)
class EqLeaf:
    value: int


@dataclass(frozen=True)
class EqNode:
    query: EqQuery
    if_eq: object
    if_neq: object


@dataclass(frozen=True)
class EqProtocolTree:
    root: object

    @property
    def depth(self) -> int:
        def d(node):
            if isinstance(node, EqLeaf):
                return 0
            return 1 + max(d(node.if_eq), d(node.if_neq))

        return d(self.root)


def eval_tree(t: EqProtocolTree, x: int, y: int) -> tuple[int, int]:
    node = t.root
    queries = 0
    while not isinstance(node, EqLeaf):
        queries += 1
        node = node.if_eq if node.query.answer(x, y) else node.if_neq
    return node.value, queries


def tree_matrix(t: EqProtocolTree, N: int) -> np.ndarray:
    return np.array([[eval_tree(t, x, y)[0] for y in range(N)] for x in range(N)], dtype=np.uint8)


@dataclass(frozen=True)
class NdEqProtocol:
    """Union of exactly 2^m trees, each of depth <= d; cost m + d."""

    m: int
    d: int
    trees: tuple

    @property
    def cost(self) -> int:
        return self.m + self.d

    def __post_init__(self):
        if len(self.trees) != 1 << self.m:
            raise ContractError(f"expected {1 << self.m} trees, got {len(self.trees)}")


# -------------------------------------------------------------- protocols

def run_rankone_protocol(a: F2Matrix, b: F2Matrix) -> tuple[int, int]:
    """The row-difference protocol for rank(A xor B) <= 1.

    Phase 1 queries Eq(a_i, b_i) for every row. If all rows agree the rank
    is 0. Otherwise, with i the first differing row, phase 2 checks
    a_j xor a_i = b_j xor b_i for every other differing row j. If all these
    pass, every nonzero row of A xor B equals a_i xor b_i, so the rank is 1
    and no further queries are needed. At most 2n - 1 queries.
    """
    if (a.n_rows, a.n_cols) != (b.n_rows, b.n_cols):
        raise ContractError("shape mismatch")
    n = a.n_rows
    queries = n  # phase 1: Eq(a_i, b_i) for all i
    differing = [i for i in range(n) if a.rows[i] != b.rows[i]]
    if not differing:
        return 1, queries
    i = differing[0]
    for j in differing[1:]:
        queries += 1
        if a.rows[j] ^ a.rows[i] != b.rows[j] ^ b.rows[i]:
            return 0, queries
    return 1, queries


def run_gt_protocol(x: int, y: int, n_bits: int) -> tuple[int, int]:
    """Binary search for the highest-order differing bit; 1 iff x > y."""
    if x >= (1 << n_bits) or y >= (1 << n_bits):
        raise ContractError("inputs exceed n_bits")
    queries = 1
    if x == y:
        return 0, queries
    lo, hi = 0, n_bits  # bit positions [lo, hi) contain the highest diff
    while hi - lo > 1:
        mid = (lo + hi + 1) // 2  # upper part [mid, hi)
        queries += 1
        xm = x >> mid << mid & ((1 << hi) - 1)
        ym = y >> mid << mid & ((1 << hi) - 1)
        if xm == ym:
            hi = mid
        else:
            lo = mid
    p = lo
    return (x >> p) & 1, queries


def run_hd1_protocol(x: int, y: int, n_bits: int) -> tuple[int, int]:
    """1 iff Hamming distance(x, y) <= 1, by halving the differing block.

    Query the whole string; if unequal, split into halves and query both.
    Two differing halves mean distance >= 2; one differing half recurses.
    A single differing bit certifies distance exactly 1.
    """
    n = 1
    while n < n_bits:
        n *= 2  # zero padding to a power of two
    queries = 1
    if x == y:
        return 1, queries
    lo, width = 0, n
    while width > 1:
        half = width // 2
        mask = (1 << half) - 1
        x_lo, y_lo = (x >> lo) & mask, (y >> lo) & mask
        x_hi, y_hi = (x >> (lo + half)) & mask, (y >> (lo + half)) & mask
        queries += 2
        lo_diff = x_lo != y_lo
        hi_diff = x_hi != y_hi
        if lo_diff and hi_diff:
            return 0, queries
        if hi_diff:
            lo += half
        width = half
    return 1, queries


# ----------------------------------------------------- non-determinism

def verify_nd(p: NdEqProtocol, target: BoolMatrix) -> bool:
    """Exhaustively check the union conditions against the target matrix."""
    if any(t.depth > p.d for t in p.trees):
        return False
    union = np.zeros((target.N, target.N), dtype=np.uint8)
    for t in p.trees:
        union |= tree_matrix(t, target.N)
    return bool(np.array_equal(union, target.bits))


def nd_violation(p: NdEqProtocol, target: BoolMatrix):
    """First (x, y) where the union disagrees with the target, or None."""
    union = np.zeros((target.N, target.N), dtype=np.uint8)
    for t in p.trees:
        union |= tree_matrix(t, target.N)
    bad = np.argwhere(union != target.bits)
    return tuple(int(v) for v in bad[0]) if bad.size else None


def cover_to_nd(cover, target: BoolMatrix) -> NdEqProtocol:
    """Turn a valid blocky cover into a union of depth-1 accept-on-equal trees."""
    union = np.zeros((target.N, target.N), dtype=np.uint8)
    for b in cover:
        if b.N != target.N:
            raise ContractError("cover size mismatch")
        union |= b.dense()
    if not np.array_equal(union, target.bits):
        raise ContractError("not a valid blocky cover of the target")
    m = ceil(log2(len(cover))) if len(cover) > 1 else 0
    trees = [EqProtocolTree(EqNode(query_from_blocky(b), EqLeaf(1), EqLeaf(0))) for b in cover]
    trees += [EqProtocolTree(EqLeaf(0))] * ((1 << m) - len(trees))
    return NdEqProtocol(m=m, d=1, trees=tuple(trees))


def nd_rankone_protocol(n: int) -> NdEqProtocol:
    """Non-deterministic Eq protocol for rankone(n) by guessing the sum.

    rank(A xor B) <= 1 iff A xor B equals some rank-<=1 matrix S, which a
    single Equality query certifies: Eq(A xor S, B). One depth-1 tree per S
    (padded to a power of two with rejecting trees) gives cost
    ceil(log2 c1) + 1.
    """
    from .f2core import enumerate_rank_le1

    mats = enumerate_rank_le1(n)
    m = ceil(log2(len(mats)))
    trees = []
    for s in mats:
        si = s.to_int()

        def row(x: int, si=si) -> int:
            return x ^ si

        trees.append(EqProtocolTree(EqNode(EqQuery(row, lambda y: y), EqLeaf(1), EqLeaf(0))))
    trees += [EqProtocolTree(EqLeaf(0))] * ((1 << m) - len(trees))
    return NdEqProtocol(m=m, d=1, trees=tuple(trees))


# ------------------------------------------------ exhaustive correctness

def rankone_protocol_exhaustive(n: int) -> dict:
    """Run the protocol on all 4^(n^2) input pairs; summary statistics."""
    total = 0
    max_queries = 0
    correct = True
    for ai in range(1 << (n * n)):
        a = F2Matrix.from_int(ai, n, n)
        for bi in range(1 << (n * n)):
            b = F2Matrix.from_int(bi, n, n)
            out, q = run_rankone_protocol(a, b)
            expected = 1 if rank_le1(a ^ b) else 0
            if out != expected or q > 2 * n - 1:
                correct = False
            max_queries = max(max_queries, q)
            total += 1
    return {"pairs_checked": total, "max_queries": max_queries, "correct": correct}
