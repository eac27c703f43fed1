"""Acceptance gate: twelve numbered end-to-end criteria.

Each test prints a single PASS line on success so the gate can be read off
the pytest -s output; tolerances are stated inline.
"""

import time
from fractions import Fraction
from math import ceil, log, log2

import numpy as np

from xorlab import blocky, counting, eqproto, fourier, pdt
from xorlab._rng import mix_seed
from xorlab.blocky import BlockyMatrix, complement_cover, nd_to_fbc, round_to_bc, tree_to_fbc
from xorlab.eqproto import EqProtocolTree, cover_to_nd, nd_rankone_protocol, verify_nd
from xorlab.f2core import F2Matrix, enumerate_rank_le1
from xorlab.problems import BoolMatrix, materialize, rankone_problem, rankone_symmetries

TRIALS = 10_000


def test_criterion_01_rpdt_error_rates():
    start = time.monotonic()
    for n in (2, 3):
        accepted = {m.to_int() for m in enumerate_rank_le1(n)}
        for m in enumerate_rank_le1(n):
            out = pdt.rpdt_trial_batch(m, TRIALS, mix_seed(101, n, m.to_int()))
            assert out.all(), f"one-sidedness violated at n={n}"
        for x in range(1 << (n * n)):
            if x in accepted:
                continue
            m = F2Matrix.from_int(x, n, n)
            out = pdt.rpdt_trial_batch(m, TRIALS, mix_seed(202, n, x))
            p_hat = 1 - out.mean()
            margin = 3 * (p_hat * (1 - p_hat) / TRIALS) ** 0.5
            assert p_hat >= 9 / 64 - margin, f"rejection rate too low at n={n}, x={x}"
    elapsed = time.monotonic() - start
    assert elapsed < 30, f"criterion 1 runtime {elapsed:.1f}s >= 30s"
    print(f"\nPASS criterion 1: RPDT one-sided, rejection >= 9/64 - 3*sigma over {TRIALS} trials ({elapsed:.1f}s)")


def test_criterion_02_eq_protocol_exhaustive():
    start = time.monotonic()
    for n in (2, 3):
        rep = eqproto.rankone_protocol_exhaustive(n)
        assert rep["pairs_checked"] == 4 ** (n * n)
        assert rep["correct"] and rep["max_queries"] <= 2 * n - 1
    elapsed = time.monotonic() - start
    assert elapsed < 60, f"criterion 2 runtime {elapsed:.1f}s >= 60s"
    print(f"\nPASS criterion 2: Eq protocol exact on all pairs (n=2: 256, n=3: 262144) with <= 2n-1 queries ({elapsed:.1f}s)")


def test_criterion_03_exact_counting_identities():
    for n in (1, 2, 3):
        census = counting.count_triples_fast(n)
        mat = materialize(rankone_problem(n))
        m = mat.bits.astype(np.int64)
        g = m.T @ m
        assert int(m.sum()) == mat.N * census.c1  # ||M||_F^2 = N c1, exact
        assert int((g * g).sum()) == mat.N * census.c3  # tr((M^T M)^2) = N c3, exact
    print("\nPASS criterion 3: Frobenius and trace identities exact integers for n <= 3")


def test_criterion_04_counting_bounds():
    for n in (1, 2, 3, 4):
        c = counting.count_triples_fast(n)
        assert c.structured_triples <= 6 * 3**n * 2 ** (4 * n)
        assert c.general_triples <= 9 * 2 ** (4 * n)
        if n >= 2:
            _, _, maxv = counting._default_kernel.general_pair_scan(n)
            assert maxv <= 9
    print("\nPASS criterion 4: structured <= 6*3^n*16^n, general <= 9*16^n, per-pair completions <= 9 for n <= 4")


def test_criterion_05_fast_vs_naive_census():
    for n in (1, 2, 3):
        assert counting.count_triples_fast(n) == counting.count_triples_naive(n)
    start = time.monotonic()
    counting.count_triples_fast(5)
    elapsed = time.monotonic() - start
    assert elapsed < 60, f"n=5 census took {elapsed:.1f}s >= 60s"
    print(f"\nPASS criterion 5: fast census == naive for n <= 3; n=5 census in {elapsed:.2f}s < 60s")


def test_criterion_06_holder_consistency_and_growth():
    assert counting.holder_bound(1) == 1.0
    bounds, gammas = [], []
    for n in (2, 3, 4):
        b = counting.holder_bound(n)
        g = fourier.gamma2_xor(rankone_problem(n))
        assert Fraction(b).limit_denominator(10**15) <= g + Fraction(1, 10**9) or b <= float(g) + 1e-9
        bounds.append(b)
        gammas.append(g)
    assert all(x < y for x, y in zip(bounds, bounds[1:]))
    assert all(x < y for x, y in zip(gammas, gammas[1:]))
    print("\nPASS criterion 6: holder_bound(1) = 1.0; bound <= gamma2 (1e-9 slack) and both strictly increasing, n <= 4")


def test_criterion_07_spectral_machinery():
    from xorlab._rng import splitmix64

    for m in (1, 4, 7, 10):
        f = lambda x: int(splitmix64(303 + m, [x])[0]) & 1
        s = fourier.wht(f, m)
        assert fourier.inverse_wht(s) == [Fraction(f(x)) for x in range(1 << m)]
        assert fourier.parseval_sum(s) == Fraction(sum(f(x) for x in range(1 << m)), 1 << m)
    p2 = rankone_problem(2)
    norm2 = fourier.gamma2_xor(p2)
    leaves = pdt.min_pdt_one_leaves(p2.inner_fn, 4)
    assert leaves >= ceil(norm2)
    a2 = fourier.approx_spectral_norm(p2.inner_fn, 4, Fraction(1, 3))
    assert a2 <= float(norm2) + 1e-7
    p3 = rankone_problem(3)
    norm3 = fourier.gamma2_xor(p3)
    a3 = fourier.approx_spectral_norm(p3.inner_fn, 9, Fraction(1, 3),
                                      symmetries=rankone_symmetries(3))
    assert a3 <= float(norm3) + 1e-7
    assert float(norm3) / a3 > float(norm2) / a2
    print("\nPASS criterion 7: WHT/Parseval exact to m=10; 1-leaves >= ceil(norm); approx norm <= exact with larger ratio at n=3")


def test_criterion_08_blocky_calculus():
    cc = complement_cover(BlockyMatrix.identity(16))  # 16 label classes
    assert cc.total_weight == 4
    cov = cc.coverage()
    assert all(cov[x][y] == Fraction(int(x != y)) for x in range(16) for y in range(16))

    from xorlab.eqproto import EqLeaf, EqNode, query_from_blocky, tree_matrix

    def random_tree(N, depth, rng):
        if depth == 0 or rng.random() < 0.2:
            return EqLeaf(int(rng.integers(0, 2)))
        b = BlockyMatrix.canonical(N, tuple(int(v) for v in rng.integers(0, 4, N)),
                                   tuple(int(v) for v in rng.integers(0, 4, N)))
        q = query_from_blocky(b)
        return EqNode(q, random_tree(N, depth - 1, rng), random_tree(N, depth - 1, rng))

    rng = np.random.default_rng(404)
    for _ in range(1000):
        t = EqProtocolTree(random_tree(16, 3, rng))
        c = tree_to_fbc(t, 16)
        assert c.total_weight <= 5**t.depth
        target = BoolMatrix(16, tree_matrix(t, 16))
        assert c.verify(target)
        if target.bits.any() and c.total_weight > 0:
            w = c.total_weight
            cover = round_to_bc(c, target, seed=505)
            assert len(cover.matrices) <= ceil(float(w) * (2 * log(16) + 1))
            assert cover.verify(target)
    print("\nPASS criterion 8: complement weight exactly 4, coverage {0,1}; 1000 random depth<=3 trees verified with weight <= 5^d; rounding within bound")


def test_criterion_09_exact_tiny_optima():
    for N in (2, 3, 4):
        for t in (BoolMatrix.identity(N), BoolMatrix.ones(N)):
            assert abs(blocky.exact_fbc(t) - 1) < 1e-9 and blocky.exact_bc(t) == 1
    jmi = lambda N: BoolMatrix(N, 1 - np.eye(N, dtype=np.uint8))
    assert blocky.exact_fbc(jmi(2), exact=True) == 1
    assert 1 <= blocky.exact_fbc(jmi(3)) <= 4
    assert 1 <= blocky.exact_fbc(jmi(4)) <= 4
    print("\nPASS criterion 9: fbc(I)=bc(I)=fbc(J)=bc(J)=1 for N <= 4; fbc(J-I_2)=1; fbc(J-I_3), fbc(J-I_4) in [1,4]")


def test_criterion_10_nd_pipeline():
    target = materialize(rankone_problem(2))
    nd = nd_rankone_protocol(2)
    assert verify_nd(nd, target)
    fc = nd_to_fbc(nd, 16)
    assert fc.total_weight <= (1 << nd.m) * 5**nd.d
    cover = round_to_bc(fc, target, seed=606)
    nd2 = cover_to_nd(cover.matrices, target)
    assert verify_nd(nd2, target)
    k = len(cover.matrices)
    assert log2(k) <= 3 * (nd.m + nd.d) + log2(2 * log(16) + 1) + 1
    print(f"\nPASS criterion 10: ND -> fbc (weight {fc.total_weight} <= {(1 << nd.m) * 5**nd.d}) -> rounded cover ({k}) -> ND verified; log2 size within bound")


def test_criterion_11_gamma2_deq_inequality():
    for n in (1, 2, 3, 4):
        assert fourier.gamma2_deq_sanity(rankone_problem(n), 2 * n - 1)
    print("\nPASS criterion 11: (1/2) log2 gamma2(rankone(n)) <= 2n-1 exactly for n <= 4")


def test_criterion_12_maxrect_fixtures():
    for N in (4, 8, 16):
        assert blocky.maxrect(BoolMatrix.ones(N)) == 1.0
        assert blocky.maxrect(BoolMatrix.identity(N)) == 1.0
    target = materialize(rankone_problem(2))
    rows, cols = blocky.max_mono_rectangle(target)
    assert min(len(rows), len(cols)) <= 15
    print("\nPASS criterion 12: maxrect(J)=maxrect(I)=1 exactly; rankone(2) witness min side <= 15")
