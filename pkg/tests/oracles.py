"""Independent oracles used to pin expected values in the test suite.

Nothing in here calls the package's elimination code: Smith factors come
from determinant divisors, cohomology of small complexes from exhaustive
enumeration, and group structure from order statistics.
"""

import math
from itertools import combinations, product

import numpy as np


def det_int(rows):
    """Integer determinant by fraction-free Gaussian elimination (Bareiss)."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_diagonal_by_minor_gcds(rows):
    """Invariant factors via determinant divisors: d_k = D_k / D_{k-1},
    where D_k is the gcd of all k x k minors.  Exponential, but fine for
    the small matrices the tests feed it."""
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    r = min(m, n)
    prev = 1
    out = []
    for k in range(1, r + 1):
        g = 0
        for ri in combinations(range(m), k):
            for ci in combinations(range(n), k):
                g = math.gcd(g, det_int([[a[i][j] for j in ci] for i in ri]))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            out.extend([0] * (r - k + 1))
            break
        out.append(g // prev)
        prev = g
    return out


def abelian_type_from_divisor_counts(counts, p):
    """Partition of a finite abelian p-group from n_k = #{x : p^k x = 0}.

    log_p n_k = sum_j min(lambda_j, k), so consecutive differences count
    the parts of size >= k.  Exponents return in descending order."""
    logs = []
    for c in counts:
        e = 0
        while c > 1:
            assert c % p == 0
            c //= p
            e += 1
        logs.append(e)
    geq = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
    result = []
    for k in range(1, len(geq) + 1):
        nxt = geq[k] if k < len(geq) else 0
        result.extend([k] * (geq[k - 1] - nxt))
    return tuple(sorted(result, reverse=True))


def enumerate_cohomology_type(dout, din, n, p, N):
    """Exponents of ker(dout)/im(din) inside (Z/p^N)^n by brute force.

    dout: rows of an (n_out x n) int matrix or None; din: (n x n_in) or
    None.  Returns the partition (descending exponents) of the quotient.
    """
    M = p**N
    vecs = np.array(list(product(range(M), repeat=n)), dtype=np.int64)
    if dout is not None and len(dout):
        a = np.array(dout, dtype=np.int64)
        ker = vecs[((vecs @ a.T) % M == 0).all(axis=1)]
    else:
        ker = vecs
    if din is not None and np.size(din):
        b = np.array(din, dtype=np.int64)
        dom = np.array(list(product(range(M), repeat=b.shape[1])), dtype=np.int64)
        img = np.unique((dom @ b.T) % M, axis=0)
    else:
        img = np.zeros((1, n), dtype=np.int64)
    img_set = {tuple(v) for v in img.tolist()}
    counts = []
    for k in range(N + 1):
        scaled = (ker * (p**k)) % M
        cnt = sum(1 for v in scaled.tolist() if tuple(v) in img_set)
        assert cnt % len(img_set) == 0
        counts.append(cnt // len(img_set))
    return abelian_type_from_divisor_counts(counts, p)


def bar_cohomology_by_enumeration(mult_table, action_units, p, N, s):
    """H^s of the inhomogeneous cochain complex of a finite group by
    enumerating every cochain (tiny instances only).

    mult_table[i][j] is the index of g_i g_j, index 0 the identity;
    action_units[i] is the unit through which g_i acts on Z/p^N.
    Returns the partition of H^s.
    """
    M = p**N
    n = len(mult_table)

    def tuples(k):
        return list(product(range(n), repeat=k))

    def diff(f, k, codomain):
        out = {}
        for tau in codomain:
            total = action_units[tau[0]] * f[tau[1:]]
            for j in range(1, k + 1):
                merged = tau[: j - 1] + (mult_table[tau[j - 1]][tau[j]],) + tau[j + 1 :]
                total += (-1) ** j * f[merged]
            total += (-1) ** (k + 1) * f[tau[:-1]]
            out[tau] = total % M
        return out

    dom_k = tuples(s)
    dom_k1 = tuples(s + 1)

    cocycles = []
    for values in product(range(M), repeat=len(dom_k)):
        f = dict(zip(dom_k, values))
        if all(v == 0 for v in diff(f, s, dom_k1).values()):
            cocycles.append(values)
    if s == 0:
        bset = {tuple([0] * len(dom_k))}
    else:
        dom_km = tuples(s - 1)
        bset = set()
        for values in product(range(M), repeat=len(dom_km)):
            g = dict(zip(dom_km, values))
            dg = diff(g, s - 1, dom_k)
            bset.add(tuple(dg[t] for t in dom_k))
    counts = []
    for k in range(N + 1):
        cnt = sum(1 for z in cocycles if tuple((p**k) * x % M for x in z) in bset)
        assert cnt % len(bset) == 0
        counts.append(cnt // len(bset))
    return abelian_type_from_divisor_counts(counts, p)


def cyclic_tensor_exponent(a: int, b: int) -> int:
    """Z/2^a (x) Z/2^b is cyclic; exponent from the presentation [2^a 2^b]
    via the determinant-divisor oracle."""
    d = smith_diagonal_by_minor_gcds([[2**a, 2**b]])
    e = 0
    x = d[0]
    while x % 2 == 0:
        x //= 2
        e += 1
    return e
