"""Exact Fourier analysis of boolean functions on {0,1}^m.

Coefficients are kept as integer numerators over the fixed denominator 2^m,
so spectral norms come out as exact rationals. The approximate spectral norm
is a floating-point LP solved with the in-house simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import lpsolve
from .errors import SizeLimitError, XorlabError
from .problems import XorProblem

MAX_M_EXACT = 16
MAX_M_LP = 9


@dataclass(frozen=True)
class FourierSpectrum:
    """Exact spectrum: coefficient of subset-mask S is numerators[S] / 2^m."""

    m: int
    numerators: tuple[int, ...]

    def coeff(self, s: int) -> Fraction:
        return Fraction(self.numerators[s], 1 << self.m)


def _butterfly(values: np.ndarray, m: int) -> np.ndarray:
    out = values.astype(np.int64).copy()
    h = 1
    while h < (1 << m):
        out = out.reshape(-1, 2 * h)
        a = out[:, :h].copy()
        b = out[:, h:].copy()
        out[:, :h] = a + b
        out[:, h:] = a - b
        h *= 2
    return out.reshape(-1)


def wht(f, m: int) -> FourierSpectrum:
    """Exact Walsh-Hadamard transform of f: {0,1}^m -> {0,1}."""
    if m > MAX_M_EXACT:
        raise SizeLimitError(f"wht supports m <= {MAX_M_EXACT}, got {m}")
    values = np.array([f(x) for x in range(1 << m)], dtype=np.int64)
    return FourierSpectrum(m, tuple(int(v) for v in _butterfly(values, m)))


def inverse_wht(s: FourierSpectrum):
    """Recover f exactly from its spectrum; returns the value table."""
    nums = _butterfly(np.array(s.numerators, dtype=np.int64), s.m)
    return [Fraction(int(v), 1 << s.m) for v in nums]


def spectral_norm(s: FourierSpectrum) -> Fraction:
    return Fraction(int(sum(abs(v) for v in s.numerators)), 1 << s.m)


def parseval_sum(s: FourierSpectrum) -> Fraction:
    """Sum of squared coefficients (equals E[f^2] exactly)."""
    return Fraction(int(sum(v * v for v in s.numerators)), 1 << (2 * s.m))


def gamma2_xor(p: XorProblem) -> Fraction:
    """gamma_2 of the communication matrix of an XOR problem.

    For XOR problems this equals the Fourier spectral norm of the inner
    function, which we compute exactly.
    """
    return spectral_norm(wht(p.inner_fn, p.m))


def hadamard_sign_matrix(m: int) -> np.ndarray:
    idx = np.arange(1 << m, dtype=np.uint64)
    pc = np.bitwise_count(idx[:, None] & idx[None, :])
    return np.where(pc % 2 == 0, 1.0, -1.0)


def _apply_bit_perm(x: int, perm) -> int:
    out = 0
    for k, src in enumerate(perm):
        out |= ((x >> src) & 1) << k
    return out


def _close_group(generators, m: int):
    """Closure of bit-position permutations under composition."""
    ident = tuple(range(m))
    group = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in generators]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[k]] for k in range(m))
                if q not in group:
                    group.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(group)


def _orbits(group, m: int) -> np.ndarray:
    """orbit id per point of {0,1}^m under the bit-permutation group."""
    n = 1 << m
    oid = np.full(n, -1, dtype=np.int64)
    nxt = 0
    for x in range(n):
        if oid[x] >= 0:
            continue
        stack = [x]
        oid[x] = nxt
        while stack:
            y = stack.pop()
            for p in group:
                z = _apply_bit_perm(y, p)
                if oid[z] < 0:
                    oid[z] = nxt
                    stack.append(z)
        nxt += 1
    return oid


def approx_spectral_norm(f, m: int, eps, symmetries=None) -> float:
    """Minimum l1 Fourier mass over g with |g - f|_inf <= eps.

    LP over split coefficients g_hat = u - v (u, v >= 0); the strict
    inequality in the definition is relaxed to <=, which does not change
    the infimum.

    `symmetries` may list bit-position permutations under which f is
    invariant; averaging an optimal g over the group preserves feasibility
    and never increases the l1 mass, so the LP can be restricted to one
    variable and one constraint pair per orbit.
    """
    if m > MAX_M_LP:
        raise SizeLimitError(f"approx_spectral_norm supports m <= {MAX_M_LP}, got {m}")
    eps = float(eps)
    n = 1 << m
    H = hadamard_sign_matrix(m)
    fv = np.array([float(f(x)) for x in range(n)])

    if symmetries:
        group = _close_group(symmetries, m)
        oid = _orbits(group, m)
        k = int(oid.max()) + 1
        for p in group:
            for x in range(n):
                if fv[_apply_bit_perm(x, p)] != fv[x]:
                    raise XorlabError("f is not invariant under the given symmetries")
        # characters transform by the same bit permutations as points
        sizes = np.bincount(oid, minlength=k).astype(float)
        reps = [int(np.nonzero(oid == o)[0][0]) for o in range(k)]
        # A[x_orbit, S_orbit] = sum over S in the orbit of chi_S(x_rep)
        A = np.zeros((k, k))
        for o, x in enumerate(reps):
            A[o] = np.bincount(oid, weights=H[x], minlength=k)
        objective = np.concatenate([sizes, sizes]).tolist()
        constraints = []
        for o, x in enumerate(reps):
            row = np.concatenate([A[o], -A[o]]).tolist()
            constraints.append((row, lpsolve.LE, fv[x] + eps))
            constraints.append((row, lpsolve.GE, fv[x] - eps))
    else:
        objective = [1.0] * (2 * n)
        constraints = []
        for x in range(n):
            row = np.concatenate([H[x], -H[x]]).tolist()
            constraints.append((row, lpsolve.LE, fv[x] + eps))
            constraints.append((row, lpsolve.GE, fv[x] - eps))
    res = lpsolve.solve(lpsolve.LinearProgram(objective, constraints))
    if res.status != "optimal":
        raise XorlabError(f"approximation LP did not solve: {res.status}")
    return res.objective_value


def gamma2_deq_sanity(p: XorProblem, deq_upper: int) -> bool:
    """Check (1/2) log2 gamma_2 <= deq_upper, as an exact rational comparison."""
    g = gamma2_xor(p)
    return g <= Fraction(1 << (2 * deq_upper))
