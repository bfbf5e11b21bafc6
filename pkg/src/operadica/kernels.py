"""Compiled kernels for the exhaustive span-composition check.

The kernel composes canonical witnesses by an explicit pullback over the
shared foot and compares the apex counts with the matrix product computed
from the nonzero entries.  It never sees the pure-Python code path, so the
two are independent routes to the same answer.
"""
import numpy as np
import numba


@numba.njit(cache=True)
def enum_vectors(n, d):
    """All length-n natural vectors with sum <= d, in lexicographic order."""
    cnt = 1
    for i in range(n):
        cnt = cnt * (d + 1 + i) // (i + 1)
    out = np.zeros((cnt, n), np.int64)
    if n == 0:
        return out
    cur = np.zeros(n, np.int64)
    r = 0
    s = 0
    while True:
        out[r, :] = cur
        r += 1
        k = n - 1
        while k >= 0:
            if s < d:
                cur[k] += 1
                s += 1
                break
            s -= cur[k]
            cur[k] = 0
            k -= 1
        if k < 0:
            break
    return out


@numba.njit(cache=True)
def witnesses(M, s, t, width):
    """Row-major witnesses of flattened s x t matrices, plus left-fibre offsets."""
    N = M.shape[0]
    L = np.full((N, width), -1, np.int64)
    R = np.full((N, width), -1, np.int64)
    F = np.zeros((N, s + 1), np.int64)
    W = np.zeros(N, np.int64)
    for b in range(N):
        k = 0
        for i in range(s):
            F[b, i] = k
            for j in range(t):
                for _ in range(M[b, i * t + j]):
                    L[b, k] = i
                    R[b, k] = j
                    k += 1
        F[b, s] = k
        W[b] = k
    return L, R, F, W


@numba.njit(cache=True)
def nonzeros(M, s, t, width):
    N = M.shape[0]
    NZ = np.zeros((N, width, 3), np.int64)
    C = np.zeros(N, np.int64)
    RO = np.zeros((N, s + 1), np.int64)
    for b in range(N):
        c = 0
        for i in range(s):
            RO[b, i] = c
            for j in range(t):
                m = M[b, i * t + j]
                if m:
                    NZ[b, c, 0] = i
                    NZ[b, c, 1] = j
                    NZ[b, c, 2] = m
                    c += 1
        RO[b, s] = c
        C[b] = c
    return NZ, C, RO


@numba.njit(cache=True)
def count_mismatches(L1, R1, W1, NZ1, C1, L2, R2, F2, NZ2, RO2, s, u):
    """Number of pairs (a, b) whose pullback composite differs from the product.

    The pullback of R1[a] against L2[b] is enumerated through the fibres of
    L2[b].  A pair passes when every cell of the product is matched and the
    apex sizes agree, which forces all other cells to be zero as well.
    """
    diff = np.zeros((max(s, 1), max(u, 1)), np.int64)
    bad = 0
    for a in range(L1.shape[0]):
        w1 = W1[a]
        c1 = C1[a]
        for b in range(L2.shape[0]):
            apex = 0
            for e1 in range(w1):
                i = L1[a, e1]
                j = R1[a, e1]
                for e2 in range(F2[b, j], F2[b, j + 1]):
                    diff[i, R2[b, e2]] += 1
                    apex += 1
            ref = 0
            for p in range(c1):
                i = NZ1[a, p, 0]
                j = NZ1[a, p, 1]
                m = NZ1[a, p, 2]
                for q in range(RO2[b, j], RO2[b, j + 1]):
                    v = m * NZ2[b, q, 2]
                    diff[i, NZ2[b, q, 1]] -= v
                    ref += v
            wrong = ref != apex
            for p in range(c1):
                i = NZ1[a, p, 0]
                j = NZ1[a, p, 1]
                for q in range(RO2[b, j], RO2[b, j + 1]):
                    k = NZ2[b, q, 1]
                    if diff[i, k] != 0:
                        wrong = True
                        diff[i, k] = 0
            if wrong:
                bad += 1
                diff[:, :] = 0
    return bad


def prepare(s, t, d):
    M = enum_vectors(s * t, d)
    width = max(d, 1)
    L, R, F, W = witnesses(M, s, t, width)
    NZ, C, RO = nonzeros(M, s, t, max(min(s * t, d), 1))
    return dict(M=M, L=L, R=R, F=F, W=W, NZ=NZ, C=C, RO=RO)


def check_block(first, second, s, u):
    return int(count_mismatches(first["L"], first["R"], first["W"], first["NZ"], first["C"],
                                second["L"], second["R"], second["F"], second["NZ"], second["RO"], s, u))


def warm_up():
    """Trigger (or load cached) compilation on a tiny instance."""
    a = prepare(1, 1, 1)
    check_block(a, a, 1, 1)


def exhaustive_composition_check(max_foot=4, max_apex=4):
    """Check all composable pairs with feet <= max_foot and apex <= max_apex.

    Returns (pairs_checked, mismatches).
    """
    cache = {}

    def get(s, t):
        if (s, t) not in cache:
            cache[(s, t)] = prepare(s, t, max_apex)
        return cache[(s, t)]

    pairs = 0
    bad = 0
    for s in range(max_foot + 1):
        for t in range(max_foot + 1):
            first = get(s, t)
            for u in range(max_foot + 1):
                second = get(t, u)
                bad += check_block(first, second, s, u)
                pairs += len(first["M"]) * len(second["M"])
    return pairs, bad
