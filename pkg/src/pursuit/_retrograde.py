"""Retrograde kernels for the k-cop game.

State layout shared by both kernels::

    state = (rank(cops) * n + robber) * 2 + side      side 0: cops to move, 1: robber

``rank`` is the colex rank of the sorted cop multiset ``c_0 <= ... <= c_{k-1}``
via the strictly increasing ``d_i = c_i + i``: ``sum binom(d_i, i + 1)``.

Both kernels return ``int32`` values with ``-1`` for positions the cops
cannot force, and agree bit for bit. The numba kernel is an event-driven
queue over implicit predecessors; the numpy kernel materializes the game
graph in CSR form and sweeps whole value levels at once.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from ._accel import HAVE_NUMBA, njit


def state_count(n: int, k: int) -> int:
    return comb(n + k - 1, k) * n * 2


def binom_table(n: int, k: int) -> np.ndarray:
    rows = n + k + 1
    t = np.zeros((rows, k + 2), dtype=np.int64)
    for a in range(rows):
        for b in range(k + 2):
            t[a, b] = comb(a, b)
    return t


def multisets(n: int, k: int, binom: np.ndarray) -> np.ndarray:
    """All sorted k-multisets of ``range(n)`` as an ``(M, k)`` array in rank order."""
    combos = np.array(list(itertools.combinations_with_replacement(range(n), k)), dtype=np.int32).reshape(-1, k)
    ranks = rank_rows(combos, binom)
    out = np.empty_like(combos)
    out[ranks] = combos
    return out


def rank_rows(sorted_rows: np.ndarray, binom: np.ndarray) -> np.ndarray:
    k = sorted_rows.shape[1]
    r = np.zeros(sorted_rows.shape[0], dtype=np.int64)
    for i in range(k):
        r += binom[sorted_rows[:, i].astype(np.int64) + i, i + 1]
    return r


def rank_tuple(cops, binom) -> int:
    return int(sum(int(binom[c + i, i + 1]) for i, c in enumerate(cops)))


# -- numba kernel --------------------------------------------------------------


@njit(cache=True, nogil=True)
def _reach(r, row, k, gptr, gidx, speed, blk, vis, stamp, out):
    for i in range(k):
        blk[row[i]] = stamp
    vis[r] = stamp
    out[0] = r
    cnt = 1
    lo = 0
    for _ in range(speed):
        hi = cnt
        for j in range(lo, hi):
            v = out[j]
            for p in range(gptr[v], gptr[v + 1]):
                u = gidx[p]
                if vis[u] != stamp and blk[u] != stamp:
                    vis[u] = stamp
                    out[cnt] = u
                    cnt += 1
        lo = hi
    return cnt


@njit(cache=True, nogil=True)
def _retro_kernel(n, k, ms, binom, bptr, bidx, gptr, gidx, speed):
    M = ms.shape[0]
    S = M * n * 2
    val = np.full(S, -1, dtype=np.int32)
    cnt = np.zeros(M * n, dtype=np.int32)
    q = np.empty(S, dtype=np.int32)
    nxt = np.empty(S, dtype=np.int32)
    blk = np.full(n, -1, dtype=np.int64)
    vis = np.full(n, -1, dtype=np.int64)
    buf = np.empty(n, dtype=np.int32)
    stamp = 0
    head = 0
    tail = 0
    for a in range(M):
        row = ms[a]
        for r in range(n):
            base = (a * n + r) * 2
            term = False
            for i in range(k):
                if row[i] == r:
                    term = True
            if term:
                val[base] = 0
                val[base + 1] = 0
                q[tail] = base + 1
                tail += 1
            else:
                cnt[a * n + r] = _reach(r, row, k, gptr, gidx, speed, blk, vis, stamp, buf)
                stamp += 1

    idx = np.zeros(k, dtype=np.int64)
    tup = np.empty(k, dtype=np.int64)
    nn = 0
    while True:
        if head == tail:
            if nn == 0:
                break
            for j in range(nn):
                q[tail] = nxt[j]
                tail += 1
            nn = 0
        s = q[head]
        head += 1
        v = val[s]
        ar = s >> 1
        a = ar // n
        r = ar - a * n
        row = ms[a]
        if s & 1:
            # robber-to-move state valued v: cop predecessors get v + 1
            for i in range(k):
                idx[i] = bptr[row[i]]
            while True:
                for i in range(k):
                    tup[i] = bidx[idx[i]]
                for i in range(1, k):
                    x = tup[i]
                    j = i - 1
                    while j >= 0 and tup[j] > x:
                        tup[j + 1] = tup[j]
                        j -= 1
                    tup[j + 1] = x
                term = False
                b = 0
                for i in range(k):
                    b += binom[tup[i] + i, i + 1]
                    if tup[i] == r:
                        term = True
                if not term:
                    t = (b * n + r) * 2
                    if val[t] < 0:
                        val[t] = v + 1
                        nxt[nn] = t
                        nn += 1
                # odometer over the product of balls
                i = k - 1
                while i >= 0:
                    idx[i] += 1
                    if idx[i] < bptr[row[i] + 1]:
                        break
                    idx[i] = bptr[row[i]]
                    i -= 1
                if i < 0:
                    break
        else:
            # cops-to-move state valued v: count down robber predecessors
            term = False
            for i in range(k):
                if row[i] == r:
                    term = True
            if term:
                continue
            m = _reach(r, row, k, gptr, gidx, speed, blk, vis, stamp, buf)
            stamp += 1
            for j in range(m):
                u = a * n + buf[j]
                cnt[u] -= 1
                if cnt[u] == 0:
                    val[u * 2 + 1] = v
                    q[tail] = u * 2 + 1
                    tail += 1
    return val


def retrograde_numba(n, k, ms, binom, ball_csr, graph_csr, robber_speed) -> np.ndarray:
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    bptr, bidx = ball_csr
    gptr, gidx = graph_csr
    return _retro_kernel(n, k, ms, binom, bptr, bidx, gptr, gidx, robber_speed)


# -- numpy kernel --------------------------------------------------------------


def _gather(ptr: np.ndarray, idx: np.ndarray, rows: np.ndarray):
    """Concatenate CSR rows; returns ``(owner position, values)``."""
    starts = ptr[rows]
    lens = ptr[rows + 1] - starts
    total = int(lens.sum())
    owner = np.repeat(np.arange(rows.size), lens)
    offs = np.arange(total) - np.repeat(np.cumsum(lens) - lens, lens)
    return owner, idx[np.repeat(starts, lens) + offs]


def _cop_transitions(ms, binom, bptr, bidx):
    """CSR over cop-multiset ranks: rank -> ranks reachable in one cop move."""
    M, k = ms.shape
    owner = np.arange(M)
    parts = np.empty((M, 0), dtype=np.int64)
    for i in range(k):
        o, vals = _gather(bptr, bidx, ms[owner, i])
        owner = owner[o]
        parts = np.concatenate([parts[o], vals[:, None].astype(np.int64)], axis=1)
    parts.sort(axis=1)
    key = owner.astype(np.int64) * M + rank_rows(parts, binom)
    key = np.unique(key)
    src, dst = key // M, key % M
    ptr = np.zeros(M + 1, dtype=np.int64)
    np.add.at(ptr, src + 1, 1)
    return np.cumsum(ptr), dst


def _robber_transitions(n, ms, adj, speed, chunk=4096):
    """CSR over ``a * n + r``: robber destinations, cop vertices excluded."""
    M, k = ms.shape
    rows_ptr = [np.zeros(1, dtype=np.int64)]
    all_idx = []
    eye = np.eye(n, dtype=bool)
    offset = 0
    for lo in range(0, M, chunk):
        sub = ms[lo : lo + chunk]
        c = sub.shape[0]
        allowed = np.ones((c, n), dtype=bool)
        allowed[np.repeat(np.arange(c), k), sub.ravel()] = False
        a_masked = adj[None, :, :] & allowed[:, None, :] & allowed[:, :, None]
        reach = np.broadcast_to(eye, (c, n, n)) & allowed[:, :, None]
        for _ in range(speed):
            reach = reach | (np.matmul(reach.astype(np.int32), a_masked.astype(np.int32)) > 0)
        flat = reach.reshape(c * n, n)
        cnt = flat.sum(axis=1)
        rows_ptr.append(offset + np.cumsum(cnt))
        offset += int(cnt.sum())
        all_idx.append(np.nonzero(flat)[1])
    ptr = np.concatenate(rows_ptr)
    return ptr, np.concatenate(all_idx) if all_idx else np.zeros(0, dtype=np.int64)


def retrograde_numpy(n, k, ms, binom, ball_csr, adj, robber_speed) -> np.ndarray:
    M = ms.shape[0]
    bptr, bidx = ball_csr
    tptr, tidx = _cop_transitions(ms, binom, bptr.astype(np.int64), bidx.astype(np.int64))
    rptr, ridx = _robber_transitions(n, ms, adj, robber_speed)

    ar = np.arange(M * n)
    a_of, r_of = ar // n, ar % n
    terminal = (ms[a_of] == r_of[:, None]).any(axis=1)
    val_c = np.full(M * n, -1, dtype=np.int32)
    val_r = np.full(M * n, -1, dtype=np.int32)
    val_c[terminal] = 0
    val_r[terminal] = 0
    cnt = (rptr[1:] - rptr[:-1]).astype(np.int64)

    r_frontier = np.flatnonzero(terminal)
    level = 0
    while r_frontier.size:
        # R_v -> C_{v+1}: cop predecessors of robber states valued v
        o, preds = _gather(tptr, tidx, a_of[r_frontier])
        cand = np.unique(preds * n + r_of[r_frontier][o])
        cand = cand[(val_c[cand] < 0) & ~terminal[cand]]
        level += 1
        val_c[cand] = level
        # C_{v+1} -> R_{v+1}: robber predecessors (reach sets are symmetric)
        if cand.size:
            o, dest = _gather(rptr, ridx, cand)
            hit = a_of[cand][o] * n + dest
            dec = np.bincount(hit, minlength=M * n)
            before = cnt > 0
            cnt -= dec
            r_frontier = np.flatnonzero(before & (cnt == 0))
            val_r[r_frontier] = level
        else:
            r_frontier = cand
    out = np.empty(M * n * 2, dtype=np.int32)
    out[0::2] = val_c
    out[1::2] = val_r
    return out
