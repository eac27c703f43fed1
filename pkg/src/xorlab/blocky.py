"""Blocky matrices and the fractional blocky cover calculus.

Blocky matrices are stored by row/column labels and never materialized
unless asked: entry(x, y) = 1 iff row_label[x] == col_label[y] != 0.
Fractional covers are weighted lists of blocky matrices with exact
rational weights; coverage checks are exact.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log

import numpy as np

from . import lpsolve
from ._rng import splitmix64
from .errors import ContractError, RandomizedFailureError, SizeLimitError, TimeoutSignal
from .eqproto import EqLeaf, EqNode, EqProtocolTree, NdEqProtocol
from .problems import BoolMatrix

MAX_LABEL_CLASSES = 22  # complement construction enumerates 2^classes subsets
MAX_TREE_DEPTH = 5
MAX_N_EXACT = 4
MAX_N_RECT_EXACT = 16


@dataclass(frozen=True)
class BlockyMatrix:
    """Label-encoded blocky matrix; label 0 means 'in no block'."""

    N: int
    row_label: tuple[int, ...]
    col_label: tuple[int, ...]

    def __post_init__(self):
        if len(self.row_label) != self.N or len(self.col_label) != self.N:
            raise ContractError("label arrays must have length N")

    @staticmethod
    def canonical(N: int, row_label, col_label) -> "BlockyMatrix":
        """Densify labels 1..k; labels without a partner on the other side
        contribute no 1-entries and collapse to 0."""
        matched = set(row_label) & set(col_label) - {0}
        remap: dict = {}
        rl, cl = [], []
        for lab in row_label:
            if lab in matched:
                remap.setdefault(lab, len(remap) + 1)
                rl.append(remap[lab])
            else:
                rl.append(0)
        for lab in col_label:
            if lab in matched:
                remap.setdefault(lab, len(remap) + 1)
                cl.append(remap[lab])
            else:
                cl.append(0)
        return BlockyMatrix(N, tuple(rl), tuple(cl))

    def entry(self, x: int, y: int) -> int:
        return 1 if self.row_label[x] == self.col_label[y] != 0 else 0

    def dense(self) -> np.ndarray:
        rl = np.array(self.row_label)
        cl = np.array(self.col_label)
        return ((rl[:, None] == cl[None, :]) & (rl[:, None] != 0)).astype(np.uint8)

    def n_blocks(self) -> int:
        return len((set(self.row_label) & set(self.col_label)) - {0})

    def is_zero(self) -> bool:
        return self.n_blocks() == 0

    @staticmethod
    def identity(N: int) -> "BlockyMatrix":
        labels = tuple(range(1, N + 1))
        return BlockyMatrix(N, labels, labels)

    @staticmethod
    def ones(N: int) -> "BlockyMatrix":
        return BlockyMatrix(N, (1,) * N, (1,) * N)

    @staticmethod
    def zero(N: int) -> "BlockyMatrix":
        return BlockyMatrix(N, (0,) * N, (0,) * N)


def is_blocky(m: BoolMatrix):
    """Recover labels iff m is blocky, else None.

    Identical nonzero rows form the candidate blocks; distinct blocks must
    then occupy disjoint column supports, and duplicated rows mapped to
    different blocks are impossible in the label encoding by construction.
    """
    patterns: dict[bytes, int] = {}
    rl = []
    for x in range(m.N):
        row = m.bits[x].tobytes()
        if not m.bits[x].any():
            rl.append(0)
            continue
        if row not in patterns:
            patterns[row] = len(patterns) + 1
        rl.append(patterns[row])
    cl = [0] * m.N
    for row, lab in patterns.items():
        support = np.nonzero(np.frombuffer(row, dtype=np.uint8))[0]
        for y in support:
            if cl[y] != 0:
                return None  # two blocks share a column
            cl[y] = lab
    cand = BlockyMatrix.canonical(m.N, tuple(rl), tuple(cl))
    return cand if np.array_equal(cand.dense(), m.bits) else None


def blocky_and(b1: BlockyMatrix, b2: BlockyMatrix) -> BlockyMatrix:
    if b1.N != b2.N:
        raise ContractError("size mismatch")
    rl = tuple((r1, r2) if r1 and r2 else 0 for r1, r2 in zip(b1.row_label, b2.row_label))
    cl = tuple((c1, c2) if c1 and c2 else 0 for c1, c2 in zip(b1.col_label, b2.col_label))
    return BlockyMatrix.canonical(b1.N, rl, cl)


# ------------------------------------------------------- fractional covers

@dataclass(frozen=True)
class FractionalCover:
    """Weighted blocky matrices; weights are exact Fractions."""

    terms: tuple  # of (Fraction, BlockyMatrix)
    target_N: int

    @property
    def total_weight(self) -> Fraction:
        return sum((w for w, _ in self.terms), Fraction(0))

    def coverage(self) -> list:
        """Exact coverage values as an N x N nested list of Fractions.

        Terms are bucketed by weight so the heavy lifting is integer numpy.
        """
        N = self.target_N
        buckets: dict[Fraction, np.ndarray] = {}
        for w, b in self.terms:
            acc = buckets.get(w)
            if acc is None:
                buckets[w] = b.dense().astype(np.int64)
            else:
                acc += b.dense()
        cov = [[Fraction(0)] * N for _ in range(N)]
        for w, counts in buckets.items():
            for x, y in zip(*np.nonzero(counts)):
                cov[x][y] += w * int(counts[x, y])
        return cov

    def verify(self, target: BoolMatrix) -> bool:
        """Coverage exactly 0 on 0-entries and >= 1 on 1-entries."""
        if target.N != self.target_N:
            return False
        cov = self.coverage()
        for x in range(target.N):
            for y in range(target.N):
                c = cov[x][y]
                if target.bits[x, y]:
                    if c < 1:
                        return False
                elif c != 0:
                    return False
        return True


@dataclass(frozen=True)
class Cover:
    """An integral blocky cover: entrywise OR of the matrices is the target."""

    matrices: tuple

    def verify(self, target: BoolMatrix) -> bool:
        union = np.zeros((target.N, target.N), dtype=np.uint8)
        for b in self.matrices:
            union |= b.dense()
        return bool(np.array_equal(union, target.bits))


def single_cover(b: BlockyMatrix) -> FractionalCover:
    return FractionalCover(((Fraction(1), b),), b.N)


def complement_cover(b: BlockyMatrix) -> FractionalCover:
    """Weight-4 fractional cover of J - B.

    Works on the label space: the matched labels plus (at most) one pseudo
    class for unmatched rows and one for unmatched columns reduce J - B to
    the complement of an identity matrix, which the random-rectangle
    construction covers with every 1-entry hit exactly once.
    """
    matched = sorted((set(b.row_label) & set(b.col_label)) - {0})
    index = {lab: i for i, lab in enumerate(matched)}
    u = len(matched)
    row_cls = []
    rho = gamma = None
    for lab in b.row_label:
        if lab in index:
            row_cls.append(index[lab])
        else:
            if rho is None:
                rho = u
                u += 1
            row_cls.append(rho)
    col_cls = []
    for lab in b.col_label:
        if lab in index:
            col_cls.append(index[lab])
        else:
            if gamma is None:
                gamma = u
                u += 1
            col_cls.append(gamma)
    if u > MAX_LABEL_CLASSES:
        raise SizeLimitError(f"complement_cover enumerates 2^{u} subsets; limit is 2^{MAX_LABEL_CLASSES}")
    w = Fraction(4, 1 << u)
    terms = []
    for subset in range(1 << u):
        rl = tuple(1 if (subset >> c) & 1 else 0 for c in row_cls)
        cl = tuple(0 if (subset >> c) & 1 else 1 for c in col_cls)
        terms.append((w, BlockyMatrix.canonical(b.N, rl, cl)))
    return FractionalCover(tuple(terms), b.N)


def fbc_and(c1: FractionalCover, c2: FractionalCover) -> FractionalCover:
    if c1.target_N != c2.target_N:
        raise ContractError("target size mismatch")
    terms = tuple((w1 * w2, blocky_and(b1, b2)) for w1, b1 in c1.terms for w2, b2 in c2.terms)
    return FractionalCover(terms, c1.target_N)


def fbc_or(c1: FractionalCover, c2: FractionalCover) -> FractionalCover:
    if c1.target_N != c2.target_N:
        raise ContractError("target size mismatch")
    return FractionalCover(c1.terms + c2.terms, c1.target_N)


def merge_terms(c: FractionalCover) -> FractionalCover:
    """Sum weights of duplicate matrices; total weight is unchanged."""
    acc: dict = {}
    for w, b in c.terms:
        key = (b.row_label, b.col_label)
        if key in acc:
            acc[key] = (acc[key][0] + w, b)
        else:
            acc[key] = (w, b)
    return FractionalCover(tuple(acc.values()), c.target_N)


def blocky_from_query(query, N: int) -> BlockyMatrix:
    """Materialize an Equality query's matrix over [N] as labels."""
    row_vals = [query.row_label(x) for x in range(N)]
    col_vals = [query.col_label(y) for y in range(N)]
    ids: dict = {}
    for v in row_vals + col_vals:
        ids.setdefault(v, len(ids) + 1)
    return BlockyMatrix.canonical(N, tuple(ids[v] for v in row_vals), tuple(ids[v] for v in col_vals))


def tree_to_fbc(t: EqProtocolTree, N: int) -> FractionalCover:
    """Fractional cover of the matrix computed by an Eq-protocol tree.

    Recursion on M_v = (B_v and M_left) or ((J - B_v) and M_right); the
    total weight is at most 5^depth.
    """
    if t.depth > MAX_TREE_DEPTH:
        raise SizeLimitError(f"tree depth limited to {MAX_TREE_DEPTH}")

    def rec(node) -> FractionalCover:
        if isinstance(node, EqLeaf):
            if node.value:
                return single_cover(BlockyMatrix.ones(N))
            return FractionalCover((), N)
        b = blocky_from_query(node.query, N)
        eq_part = fbc_and(single_cover(b), rec(node.if_eq))
        neq_part = fbc_and(complement_cover(b), rec(node.if_neq))
        return merge_terms(fbc_or(eq_part, neq_part))

    return rec(t.root)


def nd_to_fbc(p: NdEqProtocol, N: int) -> FractionalCover:
    """Union cover over all 2^m trees; weight at most 2^m * 5^d."""
    cover = FractionalCover((), N)
    for t in p.trees:
        cover = fbc_or(cover, tree_to_fbc(t, N))
    return merge_terms(cover)


def round_to_bc(c: FractionalCover, target: BoolMatrix, seed: int) -> Cover:
    """Randomized rounding: t = ceil(W(2 ln N + 1)) i.i.d. samples.

    That t makes the expected number of uncovered 1-entries at most
    N^2 e^(-t/W) < 1/e, so each attempt succeeds with good probability;
    100 attempts before giving up.
    """
    if not c.verify(target):
        raise ContractError("fractional cover does not cover the target")
    W = c.total_weight
    if W == 0:
        cover = Cover(())
        if not cover.verify(target):
            raise ContractError("empty cover cannot cover a nonzero target")
        return cover
    t = ceil(float(W) * (2 * log(target.N) + 1))
    cum = np.cumsum([float(w / W) for w, _ in c.terms])
    cum[-1] = 1.0
    stream = 0
    for _ in range(100):
        words = splitmix64(seed, range(stream, stream + t))
        stream += t
        picks = np.searchsorted(cum, words.astype(np.float64) / 2.0**64, side="right")
        mats = [c.terms[int(i)][1] for i in picks]
        cover = Cover(tuple(b for b in mats if not b.is_zero()))
        if cover.verify(target):
            return cover
    raise RandomizedFailureError("rounding failed to cover the target in 100 attempts")


# ------------------------------------------------------------ exact optima

def enumerate_blocky(N: int) -> list[BlockyMatrix]:
    """All distinct blocky matrices on [N] x [N] (N <= 4)."""
    if N > MAX_N_EXACT:
        raise SizeLimitError(f"blocky enumeration limited to N <= {MAX_N_EXACT}")
    seen = {}
    for rl in _label_maps(N):
        for cl in _label_maps(N):
            b = BlockyMatrix.canonical(N, rl, cl)
            seen[(b.row_label, b.col_label)] = b
    return list(seen.values())


def _label_maps(N: int):
    out = [()]
    for _ in range(N):
        out = [t + (lab,) for t in out for lab in range(N + 1)]
    return out


def _usable_family(target: BoolMatrix) -> list[BlockyMatrix]:
    """Blocky matrices that avoid every 0-entry of the target (any other
    matrix is forced to weight 0 in a cover)."""
    fam = []
    zero_mask = target.bits == 0
    for b in enumerate_blocky(target.N):
        if b.is_zero():
            continue
        if not (b.dense() & zero_mask).any():
            fam.append(b)
    return fam


def _cover_lp(target: BoolMatrix, exact: bool):
    """Solve the covering LP over the full usable blocky family."""
    fam = _usable_family(target)
    denses = [b.dense() for b in fam]
    one = Fraction(1) if exact else 1.0
    constraints = []
    for x, y in np.argwhere(target.bits == 1):
        constraints.append(([one * int(d[x, y]) for d in denses], lpsolve.GE, one))
    lp = lpsolve.LinearProgram([one] * len(fam), constraints)
    res = lpsolve.solve(lp, exact=exact)
    if res.status == "infeasible":
        raise ContractError("covering LP infeasible: target has an uncoverable 1-entry")
    if res.status != "optimal":
        raise ContractError(f"covering LP failed: {res.status}")
    return fam, res


def exact_fbc(target: BoolMatrix, exact: bool = False):
    """Optimal fractional cover weight. Returns a float (or a Fraction in
    exact-rational mode)."""
    if not target.bits.any():
        return Fraction(0) if exact else 0.0
    return _cover_lp(target, exact)[1].objective_value


def optimal_fractional_cover(target: BoolMatrix) -> FractionalCover:
    """An optimal-weight fractional cover with exact rational weights.

    A blocky target is its own weight-1 cover at any size; other targets go
    through the exact-rational covering LP (N <= 4).
    """
    b = is_blocky(target)
    if b is not None:
        if b.is_zero():
            return FractionalCover((), target.N)
        return single_cover(b)
    fam, res = _cover_lp(target, exact=True)
    terms = tuple((w, b) for w, b in zip(res.solution, fam) if w > 0)
    cover = FractionalCover(terms, target.N)
    if not cover.verify(target):
        raise ContractError("LP solution does not verify as a fractional cover")
    return cover


def exact_bc(target: BoolMatrix) -> int:
    """Minimum blocky cover size by branch and bound over 1-entry masks."""
    ones = [tuple(p) for p in np.argwhere(target.bits == 1)]
    if not ones:
        return 0
    pos = {p: i for i, p in enumerate(ones)}
    masks = set()
    for b in _usable_family(target):
        m = 0
        d = b.dense()
        for p, i in pos.items():
            if d[p]:
                m |= 1 << i
        if m:
            masks.add(m)
    # keep only maximal masks
    masks = [m for m in masks if not any(m != o and m | o == o for o in masks)]
    if not masks:
        raise ContractError("target has an uncoverable 1-entry")
    full = (1 << len(ones)) - 1
    best = len(ones) + 1

    def bnb(covered: int, used: int):
        nonlocal best
        if used >= best:
            return
        if covered == full:
            best = used
            return
        missing = (~covered & full)
        cell = (missing & -missing).bit_length() - 1
        for m in masks:
            if (m >> cell) & 1:
                bnb(covered | m, used + 1)

    bnb(0, 0)
    if best > len(ones):
        raise ContractError("no cover found")
    return best


# -------------------------------------------------------------- rectangles

def max_mono_rectangle(target: BoolMatrix, time_budget: float = 30.0):
    """Largest all-ones rectangle (row set, column set); exact for N <= 16,
    branch and bound with a time budget above that."""
    N = target.N
    rows = [int("".join(str(int(v)) for v in target.bits[x][::-1]), 2) for x in range(N)]
    if N <= MAX_N_RECT_EXACT:
        best_area = 0
        best = ((), ())
        for subset in range(1, 1 << N):
            common = (1 << N) - 1
            size = 0
            s = subset
            while s:
                i = (s & -s).bit_length() - 1
                common &= rows[i]
                size += 1
                s &= s - 1
            area = size * bin(common).count("1")
            if area > best_area:
                best_area = area
                best = (tuple(i for i in range(N) if (subset >> i) & 1),
                        tuple(j for j in range(N) if (common >> j) & 1))
        return best

    deadline = time.monotonic() + time_budget
    best_area = 0
    best = ((), ())

    def bnb(i: int, chosen: tuple, common: int):
        nonlocal best_area, best
        if time.monotonic() > deadline:
            raise TimeoutSignal("rectangle search exceeded its time budget")
        area = len(chosen) * bin(common).count("1")
        if area > best_area and chosen:
            best_area = area
            best = (chosen, tuple(j for j in range(N) if (common >> j) & 1))
        if i == N:
            return
        # upper bound: all remaining rows joined with current support
        if (len(chosen) + N - i) * bin(common).count("1") <= best_area:
            return
        nc = common & rows[i]
        if nc:
            bnb(i + 1, chosen + (i,), nc)
        bnb(i + 1, chosen, common)

    bnb(0, (), (1 << N) - 1)
    return best


def maxrect(target: BoolMatrix, time_budget: float = 30.0) -> float:
    """alpha / (N sqrt(beta)): total ones over the largest 1-chromatic area."""
    alpha = int(target.bits.sum())
    if alpha == 0:
        return 0.0
    u, v = max_mono_rectangle(target, time_budget)
    beta = len(u) * len(v)
    return alpha / (target.N * beta**0.5)
