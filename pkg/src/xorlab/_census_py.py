"""Pure-Python census kernel (fallback twin of _census_c).

Both kernels expose the same two primitives:

  count_valid_r3(d_rows, n)  -- brute-force count of rank-<=1 matrices R3
                                (zero included) with rank(D xor R3) <= 1
  general_pair_scan(n)       -- loop over all rectangle pairs whose row
                                sides and column sides are both in general
                                position, testing the 9 candidate values
                                of R3 per pair

See counting.py for how the census is assembled from these.
"""

from __future__ import annotations


def count_valid_r3(d_rows, n: int) -> int:
    """Number of rank-<=1 R3 (including the zero matrix) with rank(D ^ R3) <= 1."""
    d = list(d_rows)
    count = 0
    # R3 = 0
    first = 0
    ok = True
    for m in d:
        if m:
            if first == 0:
                first = m
            elif m != first:
                ok = False
                break
    if ok:
        count += 1
    # R3 = outer(a3, b3), both sides nonempty
    top = 1 << n
    rng = range(n)
    for a3 in range(1, top):
        for b3 in range(1, top):
            first = 0
            ok = True
            for i in rng:
                m = d[i] ^ b3 if (a3 >> i) & 1 else d[i]
                if m:
                    if first == 0:
                        first = m
                    elif m != first:
                        ok = False
                        break
            if ok:
                count += 1
    return count


def _general_side_pairs(n: int):
    top = 1 << n
    out = []
    for a1 in range(1, top):
        for a2 in range(1, top):
            if (a1 & ~a2) and (a1 & a2) and (a2 & ~a1):
                out.append((a1, a2))
    return out


def general_pair_scan(n: int):
    """(general_pairs, general_triples, max_valid_per_pair).

    For a pair in general position, any valid R3 satisfies
    R1 ^ R2 ^ R3 = outer(l, r) with l among the three distinct column
    patterns of R1 ^ R2 and r among its three distinct row patterns, so
    only those 9 candidates are tested.
    """
    gp = _general_side_pairs(n)
    rng = range(n)
    pairs = 0
    triples = 0
    maxv = 0
    for a1, a2 in gp:
        lcands = (a1, a2, a1 ^ a2)
        for b1, b2 in gp:
            d = [(b1 if (a1 >> i) & 1 else 0) ^ (b2 if (a2 >> i) & 1 else 0) for i in rng]
            valid = 0
            for lv in lcands:
                for rv in (b1, b2, b1 ^ b2):
                    first = 0
                    ok = True
                    for i in rng:
                        m = d[i] ^ rv if (lv >> i) & 1 else d[i]
                        if m:
                            if first == 0:
                                first = m
                            elif m != first:
                                ok = False
                                break
                    if ok:
                        valid += 1
            pairs += 1
            triples += valid
            if valid > maxv:
                maxv = valid
    return pairs, triples, maxv
