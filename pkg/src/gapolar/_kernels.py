"""Compiled inner loops for encoding and decoding.

All kernels release the GIL and work on (batch, N) arrays so callers can
split batches across a thread pool.  Channel LLRs arrive in natural
codeword order; the decoders undo the bit-reversal of G_N = B_N F^{⊗n}
themselves and then run on the plain F^{⊗n} graph, which decodes u in
natural order.
"""
import math

import numpy as np
from numba import njit

BP_LLR_CAP = 50.0


@njit(cache=True, nogil=True)
def _bitrev_table(N):
    n = 0
    while (1 << n) < N:
        n += 1
    out = np.zeros(N, dtype=np.int64)
    for i in range(N):
        x = i
        r = 0
        for _ in range(n):
            r = (r << 1) | (x & 1)
            x >>= 1
        out[i] = r
    return out


@njit(cache=True, nogil=True)
def boxplus(a, b):
    """2 atanh(tanh(a/2) tanh(b/2)) in overflow-free form."""
    aa = abs(a)
    ab = abs(b)
    m = aa if aa < ab else ab
    s = 1.0
    if (a < 0.0) != (b < 0.0):
        s = -1.0
    return s * m + math.log1p(math.exp(-abs(a + b))) - math.log1p(math.exp(-abs(a - b)))


@njit(cache=True, nogil=True)
def decision_penalty(llr, bit):
    """ln(1 + exp(-(1 - 2 bit) llr)), evaluated stably."""
    x = llr if bit == 0 else -llr
    if x >= 0.0:
        return math.log1p(math.exp(-x))
    return -x + math.log1p(math.exp(x))


@njit(cache=True, nogil=True)
def _butterfly_inplace(v):
    N = v.size
    d = 1
    while d < N:
        for j in range(N):
            if j & d == 0:
                v[j] ^= v[j + d]
        d <<= 1


@njit(cache=True, nogil=True)
def encode_batch(u):
    B, N = u.shape
    rev = _bitrev_table(N)
    out = np.empty_like(u)
    v = np.empty(N, dtype=np.uint8)
    for b in range(B):
        for j in range(N):
            v[j] = u[b, j]
        _butterfly_inplace(v)
        for j in range(N):
            out[b, j] = v[rev[j]]
    return out


@njit(cache=True, nogil=True)
def _descend(alpha, betaL, p, i, N):
    """Update row ``p`` of the LLR tree so that alpha[p, 1] is the LLR of leaf i.

    Layout: the active node of size s lives at alpha[p, s:2s]; betaL[p, s:2s]
    holds the partial sums of the most recently finished left child of size s.
    """
    if i == 0:
        s = N
    else:
        t = 0
        while (i >> t) & 1 == 0:
            t += 1
        h = 1 << t
        P = h << 1
        for j in range(h):
            a = alpha[p, P + j]
            b = alpha[p, P + h + j]
            if betaL[p, h + j]:
                alpha[p, h + j] = b - a
            else:
                alpha[p, h + j] = b + a
        s = h
    while s > 1:
        h = s >> 1
        for j in range(h):
            alpha[p, h + j] = boxplus(alpha[p, s + j], alpha[p, s + h + j])
        s = h


@njit(cache=True, nogil=True)
def _ascend(betaL, bt, p, i, bit, N):
    """Fold the decision for leaf i into row ``p`` of the partial-sum tree."""
    bt[1] = bit
    s = 1
    idx = i
    while idx & 1 and s < N:
        for j in range(s):
            bt[2 * s + j] = betaL[p, s + j] ^ bt[s + j]
            bt[3 * s + j] = bt[s + j]
        s <<= 1
        idx >>= 1
    if s < N:
        for j in range(s):
            betaL[p, s + j] = bt[s + j]


@njit(cache=True, nogil=True)
def sc_decode_batch(llr, frozen):
    B, N = llr.shape
    rev = _bitrev_table(N)
    out = np.zeros((B, N), dtype=np.uint8)
    alpha = np.zeros((1, 2 * N))
    betaL = np.zeros((1, 2 * N), dtype=np.uint8)
    bt = np.zeros(2 * N, dtype=np.uint8)
    for b in range(B):
        for j in range(N):
            alpha[0, N + j] = llr[b, rev[j]]
        for i in range(N):
            _descend(alpha, betaL, 0, i, N)
            bit = 0
            if frozen[i] == 0 and alpha[0, 1] < 0.0:
                bit = 1
            out[b, i] = bit
            _ascend(betaL, bt, 0, i, bit, N)
    return out


@njit(cache=True, nogil=True)
def crc_remainder_zero(bits, poly):
    """True iff the MSB-first bit string is divisible by the polynomial."""
    r = poly.size - 1
    reg = bits.copy()
    for i in range(bits.size - r):
        if reg[i]:
            for j in range(r + 1):
                reg[i + j] ^= poly[j]
    for i in range(bits.size - r, bits.size):
        if reg[i]:
            return False
    return True


@njit(cache=True, nogil=True)
def _stable_order(values, order):
    """Insertion sort of indices by value; ties keep index order."""
    for i in range(values.size):
        v = values[i]
        j = i
        while j > 0 and values[order[j - 1]] > v:
            order[j] = order[j - 1]
            j -= 1
        order[j] = i


@njit(cache=True, nogil=True)
def scl_decode_batch(llr, frozen, list_size, poly):
    """SCL with exact log-domain path metric.

    ``poly`` of size 1 (i.e. degree 0) disables CRC selection.
    """
    B, N = llr.shape
    L = list_size
    rev = _bitrev_table(N)
    info_idx = np.flatnonzero(frozen == 0)
    k = info_idx.size
    use_crc = poly.size > 1
    out = np.zeros((B, N), dtype=np.uint8)

    alpha = np.zeros((L, 2 * N))
    betaL = np.zeros((L, 2 * N), dtype=np.uint8)
    u = np.zeros((L, N), dtype=np.uint8)
    pm = np.zeros(L)
    active = np.zeros(L, dtype=np.bool_)
    bt = np.zeros(2 * N, dtype=np.uint8)
    leaf = np.zeros(L)
    cand = np.zeros(2 * L)
    nchild = np.zeros(L, dtype=np.int64)
    keep = np.zeros((L, 2), dtype=np.bool_)
    free = np.zeros(L, dtype=np.int64)
    word = np.zeros(k, dtype=np.uint8)
    order = np.zeros(2 * L, dtype=np.int64)
    order_l = np.zeros(L, dtype=np.int64)
    cm = np.zeros(L)

    for b in range(B):
        active[:] = False
        active[0] = True
        pm[:] = 0.0
        for j in range(N):
            alpha[0, N + j] = llr[b, rev[j]]
        for i in range(N):
            for l in range(L):
                if active[l]:
                    _descend(alpha, betaL, l, i, N)
                    leaf[l] = alpha[l, 1]
            if frozen[i]:
                for l in range(L):
                    if active[l]:
                        pm[l] += decision_penalty(leaf[l], 0)
                        u[l, i] = 0
            else:
                nc = 0
                for l in range(L):
                    if active[l]:
                        cand[2 * l] = pm[l] + decision_penalty(leaf[l], 0)
                        cand[2 * l + 1] = pm[l] + decision_penalty(leaf[l], 1)
                        nc += 2
                    else:
                        cand[2 * l] = np.inf
                        cand[2 * l + 1] = np.inf
                keep[:, :] = False
                if nc <= L:
                    for l in range(L):
                        if active[l]:
                            keep[l, 0] = True
                            keep[l, 1] = True
                else:
                    _stable_order(cand, order)
                    for m in range(L):
                        c = order[m]
                        keep[c >> 1, c & 1] = True
                nfree = 0
                for l in range(L):
                    nchild[l] = 0
                    if keep[l, 0]:
                        nchild[l] += 1
                    if keep[l, 1]:
                        nchild[l] += 1
                    if nchild[l] == 0:
                        free[nfree] = l
                        nfree += 1
                fi = 0
                for l in range(L):
                    if nchild[l] == 2:
                        dst = free[fi]
                        fi += 1
                        alpha[dst, :] = alpha[l, :]
                        betaL[dst, :] = betaL[l, :]
                        u[dst, :i] = u[l, :i]
                        active[dst] = True
                        u[dst, i] = 1
                        pm[dst] = cand[2 * l + 1]
                        u[l, i] = 0
                        pm[l] = cand[2 * l]
                    elif nchild[l] == 1:
                        bit = 0 if keep[l, 0] else 1
                        u[l, i] = bit
                        pm[l] = cand[2 * l + bit]
                for m in range(fi, nfree):
                    active[free[m]] = False
            for l in range(L):
                if active[l]:
                    _ascend(betaL, bt, l, i, u[l, i], N)

        best = -1
        if use_crc:
            # candidates in (metric, slot) order
            for l in range(L):
                cm[l] = pm[l] if active[l] else np.inf
            _stable_order(cm, order_l)
            for m in range(L):
                l = order_l[m]
                if not active[l]:
                    break
                for t in range(k):
                    word[t] = u[l, info_idx[t]]
                if crc_remainder_zero(word, poly):
                    best = l
                    break
        if best < 0:
            bm = np.inf
            for l in range(L):
                if active[l] and pm[l] < bm:
                    bm = pm[l]
                    best = l
        out[b, :] = u[best, :]
    return out


@njit(cache=True, nogil=True)
def _clamp(v):
    if v > BP_LLR_CAP:
        return BP_LLR_CAP
    if v < -BP_LLR_CAP:
        return -BP_LLR_CAP
    return v


@njit(cache=True, nogil=True)
def bp_decode_batch(llr, frozen, max_iter, early_stop):
    """Polar BP on the encoding graph; returns (u_hat, x_hat, iterations, stopped).

    Column 0 is the u side, column n the codeword side.  Each iteration runs
    all processing elements stage by stage: a full leftward pass followed
    by a full rightward pass.
    """
    B, N = llr.shape
    n = 0
    while (1 << n) < N:
        n += 1
    rev = _bitrev_table(N)
    u_out = np.zeros((B, N), dtype=np.uint8)
    x_out = np.zeros((B, N), dtype=np.uint8)
    iters = np.zeros(B, dtype=np.int64)
    stopped = np.zeros(B, dtype=np.bool_)
    Lm = np.zeros((n + 1, N))
    R = np.zeros((n + 1, N))
    uh = np.zeros(N, dtype=np.uint8)
    xh = np.zeros(N, dtype=np.uint8)
    for b in range(B):
        Lm[:, :] = 0.0
        R[:, :] = 0.0
        for j in range(N):
            Lm[n, j] = _clamp(llr[b, rev[j]])
            R[0, j] = BP_LLR_CAP if frozen[j] else 0.0
        it = 0
        while it < max_iter:
            it += 1
            for s in range(n - 1, -1, -1):
                d = 1 << s
                for j in range(N):
                    if j & d == 0:
                        l1 = Lm[s + 1, j]
                        l2 = Lm[s + 1, j + d]
                        r1 = R[s, j]
                        r2 = R[s, j + d]
                        Lm[s, j] = _clamp(boxplus(l1, l2 + r2))
                        Lm[s, j + d] = _clamp(boxplus(r1, l1) + l2)
            for s in range(n):
                d = 1 << s
                for j in range(N):
                    if j & d == 0:
                        l1 = Lm[s + 1, j]
                        l2 = Lm[s + 1, j + d]
                        r1 = R[s, j]
                        r2 = R[s, j + d]
                        R[s + 1, j] = _clamp(boxplus(r1, l2 + r2))
                        R[s + 1, j + d] = _clamp(boxplus(r1, l1) + r2)
            for j in range(N):
                uh[j] = 1 if (frozen[j] == 0 and Lm[0, j] + R[0, j] < 0.0) else 0
                xh[j] = 1 if Lm[n, j] + R[n, j] < 0.0 else 0
            if early_stop:
                v = uh.copy()
                _butterfly_inplace(v)
                same = True
                for j in range(N):
                    if v[j] != xh[j]:
                        same = False
                        break
                if same:
                    stopped[b] = True
                    break
        iters[b] = it
        for j in range(N):
            u_out[b, j] = uh[j]
            x_out[b, j] = xh[rev[j]]
    return u_out, x_out, iters, stopped
