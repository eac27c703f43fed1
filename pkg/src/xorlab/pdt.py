"""Parity decision trees.

Contains the tree model and evaluator, the constant-depth randomized
rank-at-most-1 tester (four parity queries per trial, one-sided error),
an exhaustive minimum-1-leaf search for m <= 4, and the spectral-norm
size bound check.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from ._rng import splitmix64
from .errors import ContractError, SizeLimitError, StructuralError
from .f2core import F2Matrix, rank_f2
from .fourier import spectral_norm, wht

# Smallest repetition count with (55/64)^reps < 1/3 for two-sided 2/3 boosting.
DEFAULT_REPS = 8


@dataclass(frozen=True)
class PdtLeaf:
    value: int


@dataclass(frozen=True)
class PdtNode:
    mask: int  # parity query over the set bits
    if0: object
    if1: object


@dataclass(frozen=True)
class ParityDecisionTree:
    m: int
    root: object


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


def eval_pdt(t: ParityDecisionTree, x: int) -> tuple[int, int]:
    """Evaluate on input x; returns (output bit, queries used)."""
    node = t.root
    queries = 0
    seen = set()
    while True:
        if isinstance(node, PdtLeaf):
            return node.value, queries
        if not isinstance(node, PdtNode):
            raise StructuralError(f"malformed tree node: {node!r}")
        if node.mask in seen:
            raise StructuralError("path queries the same mask twice")
        seen.add(node.mask)
        queries += 1
        node = node.if1 if _parity(x & node.mask) else node.if0
        if node is None:
            raise StructuralError("missing child")


def leaf_counts(t: ParityDecisionTree) -> tuple[int, int]:
    """(total leaves, 1-labeled leaves)."""
    total = ones = 0
    stack = [t.root]
    while stack:
        node = stack.pop()
        if isinstance(node, PdtLeaf):
            total += 1
            ones += node.value
        else:
            stack.extend([node.if0, node.if1])
    return total, ones


def pdt_computes(t: ParityDecisionTree, f, m: int) -> bool:
    if m > 16:
        raise SizeLimitError("exhaustive tree check limited to m <= 16")
    return all(eval_pdt(t, x)[0] == f(x) for x in range(1 << m))


# ------------------------------------------------------ randomized tester

@dataclass(frozen=True)
class RpdtTrial:
    """The four uniformly random index sets of one tester trial."""

    a1: int
    a2: int
    b1: int
    b2: int


def sample_trial(n: int, seed: int, index: int = 0) -> RpdtTrial:
    """Sets for trial `index` under `seed` (stream positions 4*index..4*index+3)."""
    words = splitmix64(seed, range(4 * index, 4 * index + 4))
    mask = (1 << n) - 1
    a1, a2, b1, b2 = (int(w) & mask for w in words)
    return RpdtTrial(a1, a2, b1, b2)


def _trial_output(m: F2Matrix, trial: RpdtTrial) -> int:
    """Four parity queries form a 2x2 matrix; accept iff its rank is <= 1."""
    c_rows = []
    for a in (trial.a1, trial.a2):
        row = 0
        for beta, b in enumerate((trial.b1, trial.b2)):
            par = 0
            for i in range(m.n_rows):
                if (a >> i) & 1:
                    par ^= _parity(m.rows[i] & b)
            row |= par << beta
        c_rows.append(row)
    c = F2Matrix(2, 2, tuple(c_rows))
    return 1 if rank_f2(c) <= 1 else 0


def rpdt_rankone_trial(m: F2Matrix, seed: int, index: int = 0) -> int:
    """One seeded tester trial. Always 1 on rank <= 1 inputs."""
    if m.n_rows < 2 or m.n_cols < 2:
        raise ContractError("tester requires n >= 2")
    return _trial_output(m, sample_trial(m.n_rows, seed, index))


def rpdt_rankone(m: F2Matrix, reps: int, seed: int) -> int:
    """One-sided amplification: 0 iff any of `reps` trials rejects."""
    if reps < 1:
        raise ContractError("reps must be >= 1")
    for t in range(reps):
        if rpdt_rankone_trial(m, seed, t) == 0:
            return 0
    return 1


def rpdt_trial_batch(m: F2Matrix, trials: int, seed: int) -> np.ndarray:
    """Vectorized outputs of trials 0..trials-1; identical to the scalar API."""
    n = m.n_rows
    if n < 2:
        raise ContractError("tester requires n >= 2")
    words = splitmix64(seed, np.arange(4 * trials, dtype=np.uint64))
    masks = (words & np.uint64((1 << n) - 1)).reshape(trials, 4)
    a = masks[:, 0:2]  # (T, 2)
    b = masks[:, 2:4]
    rows = np.array(m.rows, dtype=np.uint64)
    # rowpar[t, beta, i] = parity of row i restricted to column set b_beta
    rowpar = np.bitwise_count(rows[None, None, :] & b[:, :, None]) & np.uint64(1)
    abits = (a[:, :, None] >> np.arange(n, dtype=np.uint64)[None, None, :]) & np.uint64(1)
    # c[t, alpha, beta] = parity over rows i in a_alpha of rowpar[t, beta, i]
    c = np.einsum("tai,tbi->tab", abits.astype(np.int64), rowpar.astype(np.int64)) & 1
    det = (c[:, 0, 0] & c[:, 1, 1]) ^ (c[:, 0, 1] & c[:, 1, 0])
    return (1 - det).astype(np.int64)


# ---------------------------------------------------- exhaustive minimizer

def min_pdt_one_leaves(f, m: int) -> int:
    """Exact minimum number of 1-labeled leaves over all PDTs computing f.

    Recursive search over affine restrictions; since m <= 4 the reachable
    affine subspaces are few, so memoizing on the restriction's point set is
    both canonical and fast.
    """
    if m > 4:
        raise SizeLimitError(f"min_pdt_one_leaves supports m <= 4, got {m}")
    values = {x: f(x) for x in range(1 << m)}
    memo: dict[frozenset, int] = {}

    def rec(points: frozenset) -> int:
        got = memo.get(points)
        if got is not None:
            return got
        vals = {values[x] for x in points}
        if vals == {0}:
            best = 0
        elif vals == {1}:
            best = 1
        else:
            best = None
            for mask in range(1, 1 << m):
                p1 = frozenset(x for x in points if _parity(x & mask))
                if not p1 or len(p1) == len(points):
                    continue  # parity constant on this restriction
                cost = rec(points - p1) + rec(p1)
                if best is None or cost < best:
                    best = cost
        memo[points] = best
        return best

    return rec(frozenset(range(1 << m)))


def pdt_size_spectral_check(t: ParityDecisionTree, f) -> bool:
    """True iff the 1-leaf count of t is at least the spectral norm of f."""
    if not pdt_computes(t, f, t.m):
        raise ContractError("tree does not compute f")
    _, ones = leaf_counts(t)
    return ones >= spectral_norm(wht(f, t.m))


def min_reps_for_error(target: float = 1 / 3) -> int:
    """Smallest t with (55/64)^t below `target` (kept next to DEFAULT_REPS)."""
    return ceil(np.log(target) / np.log(55 / 64))
