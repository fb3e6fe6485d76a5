"""Generating pairs of small permutation groups up to Nielsen moves and automorphisms.

A :class:`SmallGroup` is a fully tabulated group (multiplication, inverses,
element orders, conjugacy classes). Pairs ``(a, b)`` of element indices are
flattened to ``a * m + b``; orbit counting runs a disjoint-set pass over that
index (see :mod:`permcomm._kernels`).
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from math import factorial
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import OrderCapExceeded, Refused, SearchBudgetExceeded
from .perm import Permutation, cycle

DEFAULT_ORDER_CAP = 10_000
DEFAULT_SEARCH_BUDGET = 2_000_000
# m^2 above this needs long_running_ok (A_7 has m^2 = 6.35e6)
PAIR_BUDGET = 1_000_000


@dataclass
class SmallGroup:
    degree: int
    elements: np.ndarray  # (m, n) 0-based images, row 0 is the identity
    mul: np.ndarray  # mul[i, j] = index of e_i * e_j
    inv: np.ndarray
    orders: np.ndarray
    class_id: np.ndarray  # conjugacy classes of G, numbered by first element
    gen_indices: tuple[int, ...]
    _index: dict

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    @property
    def class_count(self) -> int:
        return int(self.class_id.max()) + 1

    def element(self, i: int) -> Permutation:
        return Permutation(self.elements[i].tolist(), check=False)

    def index_of(self, perm: Permutation) -> int:
        return self._index[tuple(perm.images)]

    def cycle_type(self, i: int) -> tuple[int, ...]:
        return self.element(i).cycle_type()

    def is_full_alternating(self) -> bool:
        """Whether this is A_n in its natural action of degree n."""
        n = self.degree
        return n >= 2 and 2 * self.order == factorial(n)

    def commutator(self, a: int, b: int) -> int:
        mul, inv = self.mul, self.inv
        return int(mul[mul[a, b], mul[inv[a], inv[b]]])


def alternating_generators(n: int) -> list[Permutation]:
    """``(1 2 3)`` together with an n-cycle or (n-1)-cycle of even parity."""
    if n < 3:
        return []
    long = range(1, n + 1) if n % 2 else range(2, n + 1)
    return [cycle([1, 2, 3], n), cycle(list(long), n)]


def _rank_index(elements: np.ndarray):
    """Vectorized lookup from permutation rows to element indices."""
    n = elements.shape[1]
    if n <= 20:
        ranks = _kernels.lehmer_rank_numpy(elements)
        order = np.argsort(ranks)
        sorted_ranks = ranks[order]

        def lookup(rows: np.ndarray) -> np.ndarray:
            r = _kernels.lehmer_rank_numpy(rows)
            pos = np.searchsorted(sorted_ranks, r)
            return order[pos]

        return lookup
    table = {row.tobytes(): i for i, row in enumerate(elements)}

    def lookup(rows: np.ndarray) -> np.ndarray:
        return np.array([table[row.tobytes()] for row in np.ascontiguousarray(rows, dtype=elements.dtype)])

    return lookup


def build_small_group(gens: Sequence[Permutation], n: int, order_cap: int = DEFAULT_ORDER_CAP) -> SmallGroup:
    for g in gens:
        if g.degree != n:
            raise ValueError(f"generator of degree {g.degree}, expected {n}")
    ident = tuple(range(n))
    index = {ident: 0}
    elems = [ident]
    gen_images = [g.images for g in gens]
    head = 0
    while head < len(elems):
        x = elems[head]
        head += 1
        for g in gen_images:
            y = tuple(x[v] for v in g)
            if y not in index:
                if len(elems) >= order_cap:
                    raise OrderCapExceeded(f"group order exceeds cap {order_cap}")
                index[y] = len(elems)
                elems.append(y)
    E = np.array(elems, dtype=np.int64)
    m = E.shape[0]
    lookup = _rank_index(E)

    mul = np.empty((m, m), dtype=np.int64)
    chunk = max(1, 2_000_000 // max(1, m * n))
    for start in range(0, m, chunk):
        block = E[start : start + chunk]
        prod = block[:, E]  # prod[i, j, x] = e_i(e_j(x))
        mul[start : start + chunk] = lookup(prod.reshape(-1, n)).reshape(-1, m)
    inv = np.argmax(mul == 0, axis=1)

    orders = np.ones(m, dtype=np.int64)
    cur = np.arange(m)
    active = cur != 0
    while active.any():
        cur[active] = mul[cur[active], np.nonzero(active)[0]]
        orders[active] += 1
        active = cur != 0

    gen_idx = tuple(index[tuple(g)] for g in gen_images)
    class_id = _conjugacy_classes(mul, inv, gen_idx)
    return SmallGroup(n, E, mul, inv, orders, class_id, gen_idx, index)


def _conjugacy_classes(mul, inv, gen_idx) -> np.ndarray:
    m = mul.shape[0]
    label = np.full(m, -1, dtype=np.int64)
    conj = [mul[mul[s, :], inv[s]] for s in gen_idx]
    next_id = 0
    for x in range(m):
        if label[x] >= 0:
            continue
        label[x] = next_id
        stack = [x]
        while stack:
            y = stack.pop()
            for c in conj:
                z = c[y]
                if label[z] < 0:
                    label[z] = next_id
                    stack.append(z)
        next_id += 1
    return label


def _class_transversal(G: SmallGroup) -> tuple[np.ndarray, np.ndarray]:
    """For each element x: its class representative and some g with g x g^-1 = rep."""
    mul, inv = G.mul, G.inv
    m = G.order
    rep = np.full(m, -1, dtype=np.int64)
    to_rep = np.zeros(m, dtype=np.int64)  # t with t x t^-1 = rep
    for x in range(m):
        if rep[x] >= 0:
            continue
        rep[x] = x
        to_rep[x] = 0
        queue = [x]
        for y in queue:
            for s in G.gen_indices:
                z = mul[mul[s, y], inv[s]]  # z = s y s^-1, so (t s^-1) z (t s^-1)^-1 = rep
                if rep[z] < 0:
                    rep[z] = x
                    to_rep[z] = mul[to_rep[y], inv[s]]
                    queue.append(z)
    return rep, to_rep


def generating_mask(G: SmallGroup, workers: int = 1) -> np.ndarray:
    """Flat boolean mask over pair indices ``a*m + b`` of generating pairs.

    Only one ``a`` per conjugacy class is tested; the rest follow from
    ``<a, b> = G  iff  <g a g^-1, g b g^-1> = G``. The per-class tests are
    independent and may run on ``workers`` threads.
    """
    m = G.order
    mul, inv = G.mul, G.inv
    rep, to_rep = _class_transversal(G)
    reps = [int(r) for r in np.unique(rep)]
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: _kernels.generates_with(mul, r), reps))
    else:
        results = [_kernels.generates_with(mul, r) for r in reps]
    flags = dict(zip(reps, results))
    mask = np.empty((m, m), dtype=np.bool_)
    for a in range(m):
        g = to_rep[a]
        conj_b = mul[mul[g, :], inv[g]]
        mask[a] = flags[int(rep[a])][conj_b]
    return mask.reshape(-1)


def generating_pairs(G: SmallGroup) -> set[tuple[int, int]]:
    m = G.order
    idx = np.nonzero(generating_mask(G))[0]
    return {(int(k // m), int(k % m)) for k in idx}


def generates(G: SmallGroup, elements: Sequence[int]) -> bool:
    """Plain closure test, independent of the batched kernels."""
    reached = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in elements:
                y = int(G.mul[x, s])
                if y not in reached:
                    reached.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(reached) == G.order


def nielsen_neighbors(pair: tuple[int, int], G: SmallGroup) -> set[tuple[int, int]]:
    a, b = pair
    mul, inv = G.mul, G.inv
    ab, ba = int(mul[a, b]), int(mul[b, a])
    return {
        (b, a),
        (int(inv[a]), b),
        (a, int(inv[b])),
        (ab, b),
        (ba, b),
        (a, ab),
        (a, ba),
    }


# --------------------------------------------------------------------------
# automorphisms


def _conjugation_map(G: SmallGroup, s: Sequence[int], lookup) -> np.ndarray:
    s = np.asarray(s, dtype=np.int64)
    s_inv = np.argsort(s)
    return lookup(s[G.elements[:, s_inv]])


def ambient_conjugations(G: SmallGroup, conjugators: Optional[Sequence[Permutation]] = None) -> list[np.ndarray]:
    """Distinct maps ``x -> s x s^-1`` for ``s`` in S_n (or the given list).

    Only valid as automorphisms when each ``s`` normalizes G; this holds for
    A_n inside S_n.
    """
    lookup = _rank_index(G.elements)
    if conjugators is None:
        source = itertools.permutations(range(G.degree))
    else:
        source = (c.images for c in conjugators)
    seen = set()
    out = []
    for s in source:
        phi = _conjugation_map(G, s, lookup)
        key = phi.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(phi)
    return out


def _generators_for_search(G: SmallGroup) -> tuple[int, ...]:
    m = G.order
    if m == 1:
        return ()
    cyclic = np.nonzero(G.orders == m)[0]
    if cyclic.size:
        return (int(cyclic[0]),)
    by_order: dict[int, np.ndarray] = {}
    for o in np.unique(G.orders):
        if o > 1:
            by_order[int(o)] = np.nonzero(G.orders == o)[0]
    combos = sorted(
        itertools.combinations_with_replacement(sorted(by_order), 2),
        key=lambda oo: by_order[oo[0]].size * by_order[oo[1]].size,
    )
    for o1, o2 in combos:
        second = by_order[o2]
        for g in by_order[o1]:
            hits = second[_kernels.generates_with(G.mul, int(g))[second]]
            if hits.size:
                return (int(g), int(hits[0]))
    # not 2-generated: greedy generating set
    gens: list[int] = []
    while not generates(G, gens):
        best = None
        for x in range(1, m):
            if generates(G, gens + [x]):
                best = x
                break
        if best is None:
            reached = _subgroup(G, gens)
            best = next(x for x in range(1, m) if x not in reached)
        gens.append(best)
    return tuple(gens)


def _subgroup(G: SmallGroup, gens) -> set[int]:
    reached = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = int(G.mul[x, s])
                if y not in reached:
                    reached.add(y)
                    nxt.append(y)
        frontier = nxt
    return reached


def _spanning_tree(G: SmallGroup, gens: Sequence[int]) -> np.ndarray:
    seen = np.zeros(G.order, dtype=np.bool_)
    seen[0] = True
    tree = []
    queue = [0]
    for x in queue:
        for j, s in enumerate(gens):
            y = int(G.mul[s, x])
            if not seen[y]:
                seen[y] = True
                tree.append((y, j, x))
                queue.append(y)
    return np.array(tree, dtype=np.int64).reshape(-1, 3)


def search_automorphisms(G: SmallGroup, budget: int = DEFAULT_SEARCH_BUDGET) -> list[np.ndarray]:
    """All automorphisms by extending images of a fixed generating tuple.

    Candidate images must match the generators' element orders (and, for a
    pair, the order of their product); each candidate is extended along a
    spanning tree of the Cayley graph and kept if it respects every edge and
    is bijective.
    """
    gens = _generators_for_search(G)
    if not gens:
        return [np.zeros(1, dtype=np.int64)]
    pools = [np.nonzero(G.orders == G.orders[s])[0] for s in gens]
    total = int(np.prod([p.size for p in pools], dtype=np.float64))
    if total > budget:
        raise SearchBudgetExceeded(f"{total} candidate images exceed budget {budget}")
    cands = np.array(list(itertools.product(*pools)), dtype=np.int64).reshape(-1, len(gens))
    if len(gens) == 2:
        target = G.orders[G.mul[gens[0], gens[1]]]
        cands = cands[G.orders[G.mul[cands[:, 0], cands[:, 1]]] == target]
    tree = _spanning_tree(G, gens)
    out = []
    for start in range(0, cands.shape[0], 4096):
        ok, phi = _kernels.extend_images(G.mul, np.array(gens), tree, cands[start : start + 4096])
        out.extend(phi[ok])
    return out


def automorphisms(G: SmallGroup, budget: int = DEFAULT_SEARCH_BUDGET) -> list[np.ndarray]:
    """Every automorphism of G as an element-index map.

    For A_n with n != 6 these are the conjugations by S_n; otherwise (A_6
    included) they come from :func:`search_automorphisms`.
    """
    if G.is_full_alternating() and G.degree != 6:
        return ambient_conjugations(G)
    return search_automorphisms(G, budget)


def _compose_maps(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    return f[g]


def generating_subset(maps: Sequence[np.ndarray]) -> list[np.ndarray]:
    """A small subset of ``maps`` generating the same group under composition."""
    if not maps:
        return []
    target = {m.tobytes() for m in maps}
    chosen: list[np.ndarray] = []
    reached = {np.arange(maps[0].shape[0]).tobytes()}
    for phi in maps:
        if phi.tobytes() in reached:
            continue
        chosen.append(phi)
        frontier = [np.frombuffer(k, dtype=phi.dtype) for k in reached]
        while frontier:
            nxt = []
            for x in frontier:
                for s in chosen:
                    y = _compose_maps(s, x)
                    key = y.tobytes()
                    if key not in reached:
                        reached.add(key)
                        nxt.append(y)
            frontier = nxt
        if len(reached) >= len(target):
            break
    return chosen


def automorphism_generators(G: SmallGroup, source: str = "auto", budget: int = DEFAULT_SEARCH_BUDGET) -> list[np.ndarray]:
    """Generators of Aut(G) (``source="auto"``/``"search"``) or of the
    automorphisms induced by S_n (``"ambient"``, A_n only)."""
    n = G.degree
    if source == "ambient" or (source == "auto" and G.is_full_alternating() and n != 6):
        if not G.is_full_alternating():
            raise ValueError("ambient conjugation is only used for A_n")
        if n < 2:
            return []
        return ambient_conjugations(G, [cycle([1, 2], n), cycle(list(range(1, n + 1)), n)])
    if source not in ("auto", "search"):
        raise ValueError(f"unknown automorphism source {source!r}")
    return generating_subset(search_automorphisms(G, budget))


# --------------------------------------------------------------------------
# census


@dataclass(frozen=True)
class PairCensus:
    group: str
    order: int
    gen_pairs: int
    comm_classes_G: int
    comm_classes_ambient: int
    t2_systems: int
    aut_orbits: int
    wall_time: float

    CSV_FIELDS = (
        "group",
        "order",
        "gen_pairs",
        "comm_classes_G",
        "comm_classes_ambient",
        "t2_systems",
        "aut_orbits",
        "wall_time",
    )

    def csv_row(self, with_time: bool = True) -> list[str]:
        row = [str(getattr(self, f)) for f in self.CSV_FIELDS[:-1]]
        row.append(f"{self.wall_time:.3f}" if with_time else "")
        return row


def _count_labels(labels: np.ndarray, mask: np.ndarray) -> int:
    return int(np.unique(labels[mask]).size)


def pair_census(
    G: SmallGroup,
    name: Optional[str] = None,
    include_commutator_classes: bool = True,
    long_running_ok: bool = False,
    automorphism_source: str = "auto",
    workers: int = 1,
) -> PairCensus:
    """Count generating pairs, commutator classes, T2-systems and Aut-orbits.

    Commutator classes are reported twice: up to conjugacy in G and up to
    conjugacy in the ambient S_n (cycle type).
    """
    start = time.perf_counter()
    m = G.order
    if m * m > PAIR_BUDGET and not long_running_ok:
        raise Refused(f"{m * m} pairs exceed the default budget; pass long_running_ok")
    mask = generating_mask(G, workers)
    n_pairs = int(mask.sum())
    if n_pairs == 0:
        raise ValueError("group has no generating pairs")
    auts = automorphism_generators(G, automorphism_source)
    aut_arr = np.array(auts, dtype=np.int64).reshape(-1, m)
    t2_labels = _kernels.pair_orbit_labels(G.mul, G.inv, mask, aut_arr, True)
    aut_labels = _kernels.pair_orbit_labels(G.mul, G.inv, mask, aut_arr, False)

    comm_g = comm_amb = 0
    if include_commutator_classes:
        nodes = np.nonzero(mask)[0]
        a, b = nodes // m, nodes % m
        comms = np.unique(G.mul[G.mul[a, b], G.mul[G.inv[a], G.inv[b]]])
        comm_g = int(np.unique(G.class_id[comms]).size)
        comm_amb = len({G.cycle_type(int(c)) for c in comms})
    return PairCensus(
        group=name or f"order{m}",
        order=m,
        gen_pairs=n_pairs,
        comm_classes_G=comm_g,
        comm_classes_ambient=comm_amb,
        t2_systems=_count_labels(t2_labels, mask),
        aut_orbits=_count_labels(aut_labels, mask),
        wall_time=time.perf_counter() - start,
    )


def alternating_census(
    n: int, long_running_ok: bool = False, automorphism_source: str = "auto", workers: int = 1
) -> PairCensus:
    m = max(1, factorial(n) // 2)
    if m * m > PAIR_BUDGET and not long_running_ok:
        # refuse before tabulating the group, not after
        raise Refused(f"A{n} has {m * m} pairs; pass long_running_ok")
    G = build_small_group(alternating_generators(n), n)
    return pair_census(
        G,
        name=f"A{n}",
        long_running_ok=long_running_ok,
        automorphism_source=automorphism_source,
        workers=workers,
    )
