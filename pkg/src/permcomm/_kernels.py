"""Hot inner loops, each in a numba and a pure-numpy flavour.

The numba versions are used when numba imports cleanly and the environment
variable ``PERMCOMM_NO_NUMBA`` is unset (or ``0``). Both flavours return
identical results for identical inputs; ``tests/test_kernels.py`` checks this
and ``benchmarks/bench_kernels.py`` times them against each other.

Conventions: permutations are 0-based image rows; group tables use element
index 0 for the identity and ``mul[i, j]`` is the index of ``e_i * e_j``.
"""
from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("PERMCOMM_NO_NUMBA", "0") in ("", "0")
BACKEND = "numba" if USE_NUMBA else "numpy"

# Largest degree for which closure enumeration uses a dense n!-sized bitmap.
MAX_RANKED_DEGREE = 11


def _njit(func):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return None


# --------------------------------------------------------------------------
# Lehmer ranking


def lehmer_rank_numpy(perms: np.ndarray) -> np.ndarray:
    perms = np.asarray(perms, dtype=np.int64)
    k, n = perms.shape
    rank = np.zeros(k, dtype=np.int64)
    for i in range(n - 1):
        smaller = (perms[:, i + 1 :] < perms[:, i : i + 1]).sum(axis=1)
        rank = rank * (n - i) + smaller
    return rank


def _lehmer_rank_one(p, n):
    r = 0
    for i in range(n - 1):
        c = 0
        pi = p[i]
        for j in range(i + 1, n):
            if p[j] < pi:
                c += 1
        r = r * (n - i) + c
    return r


_lehmer_rank_one_nb = _njit(_lehmer_rank_one)


def _lehmer_rank_many(perms):
    k, n = perms.shape
    out = np.empty(k, dtype=np.int64)
    for t in range(k):
        out[t] = _lehmer_rank_one_nb(perms[t], n)
    return out


lehmer_rank_numba = _njit(_lehmer_rank_many)

# --------------------------------------------------------------------------
# closure order of a permutation group (dense rank bitmap, small degree)


def closure_ranked_numpy(gens: np.ndarray, cap: int) -> int:
    """Order of the group generated by ``gens``, or -1 once it passes ``cap``."""
    gens = np.asarray(gens, dtype=np.int64)
    n = gens.shape[1]
    seen = np.zeros(math.factorial(n), dtype=np.bool_)
    frontier = np.arange(n, dtype=np.int64)[None, :]
    seen[lehmer_rank_numpy(frontier)] = True
    count = 1
    if count > cap:
        return -1
    while frontier.shape[0]:
        cand = np.concatenate([frontier[:, g] for g in gens])
        ranks = lehmer_rank_numpy(cand)
        ranks, first = np.unique(ranks, return_index=True)
        fresh = ~seen[ranks]
        ranks, first = ranks[fresh], first[fresh]
        count += ranks.shape[0]
        if count > cap:
            return -1
        seen[ranks] = True
        frontier = cand[first]
    return count


def _rank_popcount(p, n, popcount):
    # Lehmer digit i = p[i] - #{j < i : p[j] < p[i]}
    r = 0
    used = 0
    for i in range(n - 1):
        v = p[i]
        r = r * (n - i) + v - popcount[used & ((1 << v) - 1)]
        used |= 1 << v
    return r


_rank_popcount_nb = _njit(_rank_popcount)


def _closure_ranked(gens, cap, total, popcount):
    ngen, n = gens.shape
    seen = np.zeros(total, dtype=np.uint8)
    rows = min(cap, total) + 1
    queue = np.empty((rows, n), dtype=np.int8)
    for i in range(n):
        queue[0, i] = i
    seen[_rank_popcount_nb(queue[0], n, popcount)] = 1
    count = 1
    if count > cap:
        return -1
    head = 0
    y = np.empty(n, dtype=np.int8)
    while head < count:
        x = queue[head]
        head += 1
        for g in range(ngen):
            for i in range(n):
                y[i] = x[gens[g, i]]
            r = _rank_popcount_nb(y, n, popcount)
            if seen[r] == 0:
                if count >= cap:
                    return -1
                seen[r] = 1
                queue[count, :] = y
                count += 1
    return count


_closure_ranked_nb = _njit(_closure_ranked)


def _popcount_table(n):
    table = np.zeros(1 << n, dtype=np.int64)
    idx = np.arange(1 << n)
    for bit in range(n):
        table += (idx >> bit) & 1
    return table


def closure_ranked_numba(gens: np.ndarray, cap: int) -> int:
    gens = np.ascontiguousarray(gens, dtype=np.int64)
    n = gens.shape[1]
    return int(_closure_ranked_nb(gens, int(cap), math.factorial(n), _popcount_table(n)))


# --------------------------------------------------------------------------
# search for an l-cycle c with c^-1 * mu also an l-cycle


def first_cycle_match_numpy(cands: np.ndarray, mu: np.ndarray) -> int:
    """Index of the first row ``c`` (an l-cycle given as its point sequence)
    such that ``c^-1 * mu`` is an l-cycle; -1 if no row qualifies."""
    cands = np.asarray(cands, dtype=np.int64)
    mu = np.asarray(mu, dtype=np.int64)
    b, l = cands.shape
    n = mu.shape[0]
    if b == 0:
        return -1
    rows = np.arange(b)[:, None]
    inv = np.broadcast_to(np.arange(n), (b, n)).copy()
    inv[rows, np.roll(cands, -1, axis=1)] = cands
    c2 = inv[:, mu]
    ident = np.arange(n)
    moved = c2 != ident
    ok = moved.sum(axis=1) == l
    if not ok.any():
        return -1
    idx = np.nonzero(ok)[0]
    sub = c2[idx]
    start = np.argmax(moved[idx], axis=1)
    x = sub[np.arange(idx.shape[0]), start]
    alive = np.ones(idx.shape[0], dtype=np.bool_)
    for _ in range(l - 1):
        alive &= x != start
        x = sub[np.arange(idx.shape[0]), x]
    alive &= x == start
    hits = idx[alive]
    return int(hits[0]) if hits.shape[0] else -1


def _first_cycle_match(cands, mu):
    b, l = cands.shape
    n = mu.shape[0]
    inv = np.arange(n)
    c2 = np.empty(n, dtype=np.int64)
    for r in range(b):
        for i in range(l):
            inv[cands[r, (i + 1) % l]] = cands[r, i]
        moved = 0
        start = -1
        for x in range(n):
            c2[x] = inv[mu[x]]
            if c2[x] != x:
                moved += 1
                if start < 0:
                    start = x
        good = False
        if moved == l:
            length = 1
            x = c2[start]
            while x != start:
                x = c2[x]
                length += 1
            good = length == l
        for i in range(l):
            inv[cands[r, i]] = cands[r, i]
        if good:
            return r
    return -1


_first_cycle_match_nb = _njit(_first_cycle_match)


def first_cycle_match_numba(cands: np.ndarray, mu: np.ndarray) -> int:
    cands = np.ascontiguousarray(cands, dtype=np.int64)
    if cands.shape[0] == 0:
        return -1
    return int(_first_cycle_match_nb(cands, np.ascontiguousarray(mu, dtype=np.int64)))


# --------------------------------------------------------------------------
# which b make <a, b> the whole table group


def generates_with_numpy(mul: np.ndarray, a: int) -> np.ndarray:
    """Boolean vector over ``b``: does ``<a, b>`` equal the whole group?"""
    m = mul.shape[0]
    reached = np.zeros((m, m), dtype=np.bool_)
    reached[:, 0] = True
    rows = np.arange(m)[:, None]
    right_a = mul[:, a]
    right_b = mul[:, np.arange(m)].T  # right_b[b, x] = x * b
    size = reached.sum(axis=1)
    while True:
        nxt = reached.copy()
        nxt[:, right_a] |= reached
        nxt[rows, right_b] |= reached
        new_size = nxt.sum(axis=1)
        reached = nxt
        if np.array_equal(new_size, size):
            break
        size = new_size
    return size == m


def _generates_with(mul, a, out):
    m = mul.shape[0]
    stamp = np.zeros(m, dtype=np.int64)
    queue = np.empty(m, dtype=np.int64)
    half = m // 2
    for b in range(m):
        tag = b + 1
        stamp[0] = tag
        queue[0] = 0
        count = 1
        head = 0
        full = count > half
        while head < count and not full:
            x = queue[head]
            head += 1
            y = mul[x, a]
            if stamp[y] != tag:
                stamp[y] = tag
                queue[count] = y
                count += 1
            y = mul[x, b]
            if stamp[y] != tag:
                stamp[y] = tag
                queue[count] = y
                count += 1
            # a proper subgroup has index >= 2
            if count > half:
                full = True
        out[b] = full
    return out


_generates_with_nb = _njit(_generates_with)


def generates_with_numba(mul: np.ndarray, a: int) -> np.ndarray:
    mul = np.ascontiguousarray(mul, dtype=np.int64)
    out = np.zeros(mul.shape[0], dtype=np.bool_)
    if mul.shape[0] == 1:
        out[0] = True
        return out
    return _generates_with_nb(mul, int(a), out)


# --------------------------------------------------------------------------
# orbits of Nielsen moves and automorphisms on pairs (disjoint-set)


def pair_orbit_labels_numpy(mul, inv, gen_mask, auts, nielsen):
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    m = mul.shape[0]
    nodes = np.nonzero(gen_mask)[0]
    a, b = nodes // m, nodes % m
    dst = []
    if nielsen:
        dst.extend([
            b * m + a,
            inv[a] * m + b,
            a * m + inv[b],
            mul[a, b] * m + b,
            mul[b, a] * m + b,
            a * m + mul[a, b],
            a * m + mul[b, a],
        ])
    for phi in auts:
        dst.append(phi[a] * m + phi[b])
    size = m * m
    if not dst:
        return np.arange(size, dtype=np.int64)
    src = np.tile(nodes, len(dst))
    dst = np.concatenate(dst)
    graph = coo_matrix((np.ones(src.shape[0], dtype=np.int8), (src, dst)), shape=(size, size))
    _, labels = connected_components(graph.tocsr(), directed=True, connection="weak")
    return labels.astype(np.int64)


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


_find_nb = _njit(_find)


def _pair_orbit_labels(mul, inv, gen_mask, auts, nielsen):
    m = mul.shape[0]
    size = m * m
    parent = np.arange(size)
    nbr = np.empty(7 + auts.shape[0], dtype=np.int64)
    for node in range(size):
        if not gen_mask[node]:
            continue
        a = node // m
        b = node % m
        k = 0
        if nielsen:
            nbr[0] = b * m + a
            nbr[1] = inv[a] * m + b
            nbr[2] = a * m + inv[b]
            nbr[3] = mul[a, b] * m + b
            nbr[4] = mul[b, a] * m + b
            nbr[5] = a * m + mul[a, b]
            nbr[6] = a * m + mul[b, a]
            k = 7
        for j in range(auts.shape[0]):
            nbr[k] = auts[j, a] * m + auts[j, b]
            k += 1
        ra = _find_nb(parent, node)
        for t in range(k):
            rb = _find_nb(parent, nbr[t])
            if ra != rb:
                # smaller root wins so labels do not depend on edge order
                if ra < rb:
                    parent[rb] = ra
                else:
                    parent[ra] = rb
                    ra = rb
    for node in range(size):
        parent[node] = _find_nb(parent, node)
    return parent


_pair_orbit_labels_nb = _njit(_pair_orbit_labels)


def pair_orbit_labels_numba(mul, inv, gen_mask, auts, nielsen):
    auts = np.ascontiguousarray(auts, dtype=np.int64).reshape(-1, mul.shape[0])
    return _pair_orbit_labels_nb(
        np.ascontiguousarray(mul, dtype=np.int64),
        np.ascontiguousarray(inv, dtype=np.int64),
        np.ascontiguousarray(gen_mask, dtype=np.bool_),
        auts,
        bool(nielsen),
    )


# --------------------------------------------------------------------------
# extend generator images to homomorphisms of a table group


def extend_images_numpy(mul, gens, tree, cands):
    """Try each candidate image tuple ``cands[c]`` for the generators ``gens``.

    ``tree`` lists ``(y, j, x)`` with ``y = gens[j] * x`` in breadth-first
    order from the identity, covering every element once. Returns
    ``(ok, maps)`` where ``maps[c]`` is the induced element map and ``ok[c]``
    says it is a bijective homomorphism.
    """
    m = mul.shape[0]
    c = cands.shape[0]
    phi = np.zeros((c, m), dtype=np.int64)
    for y, j, x in tree:
        phi[:, y] = mul[cands[:, j], phi[:, x]]
    ok = np.ones(c, dtype=np.bool_)
    for j, s in enumerate(gens):
        lhs = phi[:, mul[s, :]]
        rhs = mul[cands[:, j][:, None], phi]
        ok &= (lhs == rhs).all(axis=1)
    ok &= (np.sort(phi, axis=1) == np.arange(m)).all(axis=1)
    return ok, phi


def _extend_images(mul, gens, tree, cands, ok, phi):
    m = mul.shape[0]
    k = gens.shape[0]
    seen = np.zeros(m, dtype=np.int64)
    for c in range(cands.shape[0]):
        phi[c, 0] = 0
        for t in range(tree.shape[0]):
            y = tree[t, 0]
            phi[c, y] = mul[cands[c, tree[t, 1]], phi[c, tree[t, 2]]]
        good = True
        for j in range(k):
            s = gens[j]
            tj = cands[c, j]
            for x in range(m):
                if phi[c, mul[s, x]] != mul[tj, phi[c, x]]:
                    good = False
                    break
            if not good:
                break
        if good:
            tag = c + 1
            for x in range(m):
                v = phi[c, x]
                if seen[v] == tag:
                    good = False
                    break
                seen[v] = tag
        ok[c] = good
    return ok, phi


_extend_images_nb = _njit(_extend_images)


def extend_images_numba(mul, gens, tree, cands):
    cands = np.ascontiguousarray(cands, dtype=np.int64)
    c, m = cands.shape[0], mul.shape[0]
    ok = np.zeros(c, dtype=np.bool_)
    phi = np.zeros((c, m), dtype=np.int64)
    tree = np.asarray(tree, dtype=np.int64).reshape(-1, 3)
    return _extend_images_nb(
        np.ascontiguousarray(mul, dtype=np.int64),
        np.asarray(gens, dtype=np.int64),
        tree,
        cands,
        ok,
        phi,
    )


# --------------------------------------------------------------------------
# dispatch

if USE_NUMBA:
    lehmer_rank = lehmer_rank_numba
    closure_ranked = closure_ranked_numba
    first_cycle_match = first_cycle_match_numba
    generates_with = generates_with_numba
    pair_orbit_labels = pair_orbit_labels_numba
    extend_images = extend_images_numba
else:
    lehmer_rank = lehmer_rank_numpy
    closure_ranked = closure_ranked_numpy
    first_cycle_match = first_cycle_match_numpy
    generates_with = generates_with_numpy
    pair_orbit_labels = pair_orbit_labels_numpy
    extend_images = extend_images_numpy
