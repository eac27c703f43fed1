"""Self-contained dense simplex solver (minimization).

Two-phase tableau simplex. Float mode uses numpy rows with Dantzig pricing
(smallest-index tie break) and falls back to Bland's rule after a stall, so
the pivot sequence is deterministic and cycling terminates. Exact mode runs
the same algorithm over Fractions with Bland's rule throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import SizeLimitError

MAX_DENSE = 4000
MAX_EXACT_VARS = 400

LE, GE, EQ = "<=", ">=", "="


@dataclass
class LinearProgram:
    """minimize c.x subject to rows (coeffs, rel, rhs); bounds per variable.

    bounds is either the string "nonneg" (all variables >= 0) or a list of
    "nonneg"/"free" entries, one per variable.
    """

    objective: list
    constraints: list  # of (coeffs, rel, rhs)
    bounds: object = "nonneg"

    def n_vars(self) -> int:
        return len(self.objective)


@dataclass
class LpResult:
    status: str  # optimal | infeasible | unbounded | failure
    solution: list | None
    objective_value: object


def solve(lp: LinearProgram, exact: bool = False) -> LpResult:
    n = lp.n_vars()
    m = len(lp.constraints)
    if n > MAX_DENSE or m > MAX_DENSE:
        raise SizeLimitError(f"LP too large for dense simplex: {n} vars, {m} constraints")
    if exact and n > MAX_EXACT_VARS:
        raise SizeLimitError(f"exact mode limited to {MAX_EXACT_VARS} variables")

    bounds = lp.bounds
    if bounds == "nonneg":
        bounds = ["nonneg"] * n
    if len(bounds) != n:
        raise SizeLimitError("bounds length mismatch")

    # Free variables split into positive and negative parts.
    col_of = []  # var -> (pos col, neg col or None)
    ncols = 0
    for b in bounds:
        if b == "free":
            col_of.append((ncols, ncols + 1))
            ncols += 2
        else:
            col_of.append((ncols, None))
            ncols += 1

    num = Fraction if exact else float

    def expand(coeffs):
        row = [num(0)] * ncols
        for v, a in enumerate(coeffs):
            if a == 0:
                continue
            p, q = col_of[v]
            row[p] += num(a)
            if q is not None:
                row[q] -= num(a)
        return row

    rows = []
    rels = []
    rhs = []
    for coeffs, rel, b in lp.constraints:
        if len(coeffs) != n:
            raise SizeLimitError("constraint length mismatch")
        r = expand(coeffs)
        bb = num(b)
        if bb < 0:
            r = [-a for a in r]
            bb = -bb
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        rows.append(r)
        rels.append(rel)
        rhs.append(bb)

    # Slack / surplus / artificial columns.
    n_struct = ncols
    slack_cols = []
    art_cols = []
    for i, rel in enumerate(rels):
        if rel == LE:
            slack_cols.append((i, num(1)))
        elif rel == GE:
            slack_cols.append((i, num(-1)))
        else:
            slack_cols.append(None)
    total = n_struct + sum(1 for s in slack_cols if s is not None)
    basis = [-1] * m
    col = n_struct
    for i, s in enumerate(slack_cols):
        if s is not None:
            rows[i] += [num(0)] * 0  # widened below
    # build full tableau
    width_slacks = sum(1 for s in slack_cols if s is not None)
    for i in range(m):
        rows[i] = rows[i] + [num(0)] * width_slacks
    col = n_struct
    for i, s in enumerate(slack_cols):
        if s is not None:
            rows[i][col] = s[1]
            if s[1] > 0:
                basis[i] = col
            col += 1
    # artificials where no slack basis is available
    for i in range(m):
        if basis[i] == -1:
            art_cols.append(len(rows[i]))
            for k in range(m):
                rows[k].append(num(1) if k == i else num(0))
            basis[i] = art_cols[-1]
    total = len(rows[0])
    for i in range(m):
        rows[i].append(rhs[i])

    obj = expand(lp.objective) + [num(0)] * (total - n_struct)

    if exact:
        T = [list(r) for r in rows]
        status = _phases_exact(T, basis, obj, art_cols, total)
        if status != "optimal":
            return LpResult(status, None, None)
        x = _extract(lambda i, j: T[i][j], basis, m, total, col_of, num)
        val = sum(num(c) * xv for c, xv in zip(lp.objective, x))
        return LpResult("optimal", x, val)

    T = np.array([[float(a) for a in r] for r in rows], dtype=np.float64)
    status = _phases_float(T, basis, np.array([float(a) for a in obj]), art_cols, total)
    if status != "optimal":
        return LpResult(status, None, None)
    x = _extract(lambda i, j: T[i, j], basis, m, total, col_of, float)
    val = float(np.dot(np.array(lp.objective, dtype=float), np.array(x)))
    return LpResult("optimal", x, val)


def _extract(at, basis, m, total, col_of, num):
    full = [num(0)] * total
    for i, b in enumerate(basis):
        if b < total:
            full[b] = at(i, total)
    x = []
    for p, q in col_of:
        x.append(full[p] - (full[q] if q is not None else num(0)))
    return x


# ---------------------------------------------------------------- float path

_FEAS_TOL = 1e-9
_MAX_ITERS = 100_000


def _pivot_float(T, z, basis, pj, pi):
    T[pi] /= T[pi, pj]
    colv = T[:, pj].copy()
    colv[pi] = 0.0
    T -= np.outer(colv, T[pi])
    z -= z[pj] * T[pi]
    basis[pi] = pj


def _run_float(T, z, basis, allowed):
    """Dantzig pricing with a lexicographic ratio test.

    Ties in the minimum ratio are broken by the lexicographically smallest
    scaled row, which prevents cycling on degenerate instances without the
    slowdown of Bland's rule.
    """
    m = T.shape[0]
    iters = 0
    while True:
        iters += 1
        if iters > _MAX_ITERS:
            return "failure"
        zz = np.where(allowed, z[:-1], 0.0)
        pj = int(np.argmin(zz))
        if zz[pj] >= -_FEAS_TOL:
            return "optimal"
        colv = T[:, pj]
        pos = colv > _FEAS_TOL
        if not pos.any():
            return "unbounded"
        ratios = np.full(m, np.inf)
        ratios[pos] = T[pos, -1] / colv[pos]
        best = ratios.min()
        ties = np.nonzero(ratios <= best + _FEAS_TOL)[0]
        pi = int(ties[0])
        if ties.size > 1:
            for i in map(int, ties[1:]):
                a = T[i] / colv[i]
                b = T[pi] / colv[pi]
                d = np.nonzero(np.abs(a - b) > _FEAS_TOL)[0]
                if d.size and a[d[0]] < b[d[0]]:
                    pi = i
        _pivot_float(T, z, basis, pj, pi)


def _phases_float(T, basis, obj, art_cols, total):
    m = T.shape[0]
    art = set(art_cols)
    if art:
        z1 = np.zeros(total + 1)
        for j in art:
            z1[j] = 1.0
        for i in range(m):
            z1 -= z1[basis[i]] * T[i]
        allowed = np.ones(total, dtype=bool)
        st = _run_float(T, z1, basis, allowed)
        if st != "optimal":
            return "failure" if st == "unbounded" else st
        if -z1[-1] > 1e-7:
            return "infeasible"
        _drive_out_artificials(T, basis, art, total,
                               lambda i, j: abs(T[i, j]) > _FEAS_TOL,
                               lambda pj, pi: _pivot_float(T, z1, basis, pj, pi))
    z2 = obj.astype(float).copy()
    z2 = np.append(z2, 0.0)
    for i in range(m):
        z2 -= z2[basis[i]] * T[i]
    allowed = np.ones(total, dtype=bool)
    for j in art:
        allowed[j] = False
    return _run_float(T, z2, basis, allowed)


def _drive_out_artificials(T, basis, art, total, nonzero, do_pivot):
    for i in range(len(basis)):
        if basis[i] in art:
            for j in range(total):
                if j not in art and nonzero(i, j):
                    do_pivot(j, i)
                    break
            # a fully-zero row is redundant; the artificial stays basic at 0


# ---------------------------------------------------------------- exact path

def _pivot_exact(T, z, basis, pj, pi):
    piv = T[pi][pj]
    T[pi] = [a / piv for a in T[pi]]
    for i in range(len(T)):
        if i != pi and T[i][pj] != 0:
            f = T[i][pj]
            T[i] = [a - f * b for a, b in zip(T[i], T[pi])]
    if z[pj] != 0:
        f = z[pj]
        for j in range(len(z)):
            z[j] -= f * T[pi][j]
    basis[pi] = pj


def _run_exact(T, z, basis, allowed):
    m = len(T)
    iters = 0
    while True:
        iters += 1
        if iters > _MAX_ITERS:
            return "failure"
        pj = -1
        for j in range(len(z) - 1):
            if allowed[j] and z[j] < 0:
                pj = j
                break
        if pj < 0:
            return "optimal"
        pi = -1
        best = None
        for i in range(m):
            if T[i][pj] > 0:
                r = T[i][-1] / T[i][pj]
                if best is None or r < best or (r == best and basis[i] < basis[pi]):
                    best = r
                    pi = i
        if pi < 0:
            return "unbounded"
        _pivot_exact(T, z, basis, pj, pi)


def _phases_exact(T, basis, obj, art_cols, total):
    m = len(T)
    art = set(art_cols)
    if art:
        z1 = [Fraction(0)] * (total + 1)
        for j in art:
            z1[j] = Fraction(1)
        for i in range(m):
            if z1[basis[i]] != 0:
                f = z1[basis[i]]
                for j in range(total + 1):
                    z1[j] -= f * T[i][j]
        allowed = [True] * total
        st = _run_exact(T, z1, basis, allowed)
        if st != "optimal":
            return "failure" if st == "unbounded" else st
        if -z1[-1] > 0:
            return "infeasible"
        _drive_out_artificials(T, basis, art, total,
                               lambda i, j: T[i][j] != 0,
                               lambda pj, pi: _pivot_exact(T, z1, basis, pj, pi))
    z2 = list(obj) + [Fraction(0)]
    z2 = [Fraction(a) for a in z2]
    for i in range(m):
        if z2[basis[i]] != 0:
            f = z2[basis[i]]
            for j in range(total + 1):
                z2[j] -= f * T[i][j]
    allowed = [j not in art for j in range(total)]
    return _run_exact(T, z2, basis, allowed)
