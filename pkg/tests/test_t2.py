import itertools
from collections import deque

import numpy as np
import pytest

import oracles
from permcomm import _kernels
from permcomm.errors import OrderCapExceeded, Refused, SearchBudgetExceeded
from permcomm.perm import cycle, parse_cycles
from permcomm.t2 import (
    alternating_census,
    alternating_generators,
    ambient_conjugations,
    automorphism_generators,
    automorphisms,
    build_small_group,
    generates,
    generating_mask,
    generating_pairs,
    nielsen_neighbors,
    pair_census,
    search_automorphisms,
)


@pytest.fixture(scope="module")
def A4():
    return build_small_group(alternating_generators(4), 4)


@pytest.fixture(scope="module")
def A5():
    return build_small_group([parse_cycles("(1 2 3)", 5), parse_cycles("(3 4 5)", 5)], 5)


@pytest.fixture(scope="module")
def A6():
    return build_small_group(alternating_generators(6), 6)


@pytest.fixture(scope="module")
def C3():
    return build_small_group([cycle([1, 2, 3], 3)], 3)


def _tuples(G):
    return [tuple(int(v) for v in row) for row in G.elements]


def brute_generating_pairs(G):
    els = _tuples(G)
    n, m = G.degree, G.order
    return {
        (i, j)
        for i, a in enumerate(els)
        for j, b in enumerate(els)
        if len(oracles.group_elements([a, b], n)) == m
    }


def brute_orbits(G, pairs, auts, with_nielsen):
    """Plain BFS over pairs; edges from automorphisms and optionally Nielsen moves."""
    label = {}
    count = 0
    for start in sorted(pairs):
        if start in label:
            continue
        label[start] = count
        queue = deque([start])
        while queue:
            a, b = queue.popleft()
            nxt = [(int(phi[a]), int(phi[b])) for phi in auts]
            if with_nielsen:
                nxt += list(nielsen_neighbors((a, b), G))
            for q in nxt:
                assert q in pairs
                if q not in label:
                    label[q] = count
                    queue.append(q)
        count += 1
    return count, label


# ---- group tables


def test_build_examples(A5):
    assert A5.order == 60 and A5.class_count == 5
    c5 = build_small_group([cycle([1, 2, 3, 4, 5], 5)], 5)
    assert c5.order == 5
    with pytest.raises(OrderCapExceeded):
        build_small_group(alternating_generators(9), 9, order_cap=10_000)


def test_table_is_a_group(A5):
    els = _tuples(A5)
    rng = np.random.default_rng(0)
    for a, b, c in rng.integers(0, 60, size=(500, 3)):
        assert A5.mul[A5.mul[a, b], c] == A5.mul[a, A5.mul[b, c]]
        assert els[A5.mul[a, b]] == oracles.compose(els[a], els[b])
    assert (A5.mul[0] == np.arange(60)).all()
    assert (A5.mul[np.arange(60), A5.inv] == 0).all()
    for i, e in enumerate(els):
        k, x = 1, e
        while x != els[0]:
            x = oracles.compose(x, e)
            k += 1
        assert A5.orders[i] == k


def test_class_ids_constant_on_conjugacy(A5):
    for g in range(60):
        conj = A5.mul[A5.mul[g, :], A5.inv[g]]
        assert (A5.class_id[conj] == A5.class_id).all()


# ---- generating pairs


def test_generating_pair_counts(A4, A5, C3):
    assert generating_pairs(A5) == brute_generating_pairs(A5)
    assert len(generating_pairs(A5)) == 2280
    assert generating_pairs(A4) == brute_generating_pairs(A4)
    assert len(generating_pairs(A4)) == 96
    assert generating_pairs(C3) == {(a, b) for a in range(3) for b in range(3)} - {(0, 0)}


def test_generating_mask_worker_independent(A6):
    assert (generating_mask(A6, workers=1) == generating_mask(A6, workers=3)).all()


def test_generates_oracle(A5):
    assert generates(A5, list(A5.gen_indices))
    assert not generates(A5, [A5.gen_indices[0]])


def test_nielsen_neighbors(A5):
    a, b = 5, 17
    nb = nielsen_neighbors((a, b), A5)
    mul, inv = A5.mul, A5.inv
    assert (b, a) in nb and (int(inv[a]), b) in nb and (a, int(inv[b])) in nb
    assert {(int(mul[a, b]), b), (int(mul[b, a]), b), (a, int(mul[a, b])), (a, int(mul[b, a]))} <= nb
    nb = nielsen_neighbors((0, b), A5)
    assert (b, 0) in nb and (0, int(inv[b])) in nb and (b, b) in nb and len(nb) <= 7


def test_nielsen_moves_preserve_generation(A5):
    pairs = generating_pairs(A5)
    for pair in pairs:
        for q in nielsen_neighbors(pair, A5):
            assert q in pairs
            assert generates(A5, list(q))


# ---- automorphisms


def _check_homomorphism(G, phi, rng, samples=1000):
    a = rng.integers(0, G.order, samples)
    b = rng.integers(0, G.order, samples)
    assert (phi[G.mul[a, b]] == G.mul[phi[a], phi[b]]).all()
    assert np.unique(phi).size == G.order


def test_automorphism_counts(A5, C3, A6):
    rng = np.random.default_rng(1)
    auts5 = automorphisms(A5)
    assert len(auts5) == 120
    assert len(automorphisms(C3)) == 2
    auts6 = automorphisms(A6)
    assert len(auts6) == 1440
    assert len({phi.tobytes() for phi in auts6}) == 1440
    inner6 = {phi.tobytes() for phi in ambient_conjugations(A6)}
    assert len(inner6) == 720 and inner6 <= {phi.tobytes() for phi in auts6}
    for phi in itertools.chain(auts5, auts6):
        _check_homomorphism(A6 if phi.size == 360 else A5, phi, rng)


def test_search_agrees_with_ambient_on_a5(A5):
    searched = {phi.tobytes() for phi in search_automorphisms(A5)}
    ambient = {phi.tobytes() for phi in ambient_conjugations(A5)}
    assert searched == ambient


def test_search_budget(A6):
    with pytest.raises(SearchBudgetExceeded):
        search_automorphisms(A6, budget=10)


def test_automorphism_generators_generate(A6):
    gens = automorphism_generators(A6)
    reached = {np.arange(360).tobytes()}
    frontier = [np.arange(360)]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = s[x]
                if y.tobytes() not in reached:
                    reached.add(y.tobytes())
                    nxt.append(y)
        frontier = nxt
    assert len(reached) == 1440


# ---- census


@pytest.mark.parametrize("n", [3, 4, 5])
def test_census_matches_brute_force(n):
    G = build_small_group(alternating_generators(n), n)
    census = pair_census(G)
    pairs = brute_generating_pairs(G)
    auts = automorphisms(G)
    t2, _ = brute_orbits(G, pairs, auts, True)
    orb, _ = brute_orbits(G, pairs, auts, False)
    assert (census.gen_pairs, census.t2_systems, census.aut_orbits) == (len(pairs), t2, orb)


def test_table_rows_small():
    expected = {3: (1, 1, 4), 4: (1, 1, 4), 5: (2, 2, 19)}
    for n, row in expected.items():
        c = alternating_census(n)
        assert (c.comm_classes_ambient, c.t2_systems, c.aut_orbits) == row


def test_inequality_chain_and_refinement(A5, A6):
    for G in (A5, A6):
        m = G.order
        mask = generating_mask(G)
        auts = np.array(automorphism_generators(G), dtype=np.int64).reshape(-1, m)
        t2 = _kernels.pair_orbit_labels(G.mul, G.inv, mask, auts, True)[mask]
        orb = _kernels.pair_orbit_labels(G.mul, G.inv, mask, auts, False)[mask]
        n_t2, n_orb = np.unique(t2).size, np.unique(orb).size
        assert n_t2 <= n_orb <= int(mask.sum())
        # each Aut-orbit sits inside a single T2-system
        pairs = np.unique(np.stack([orb, t2]), axis=1)
        assert np.unique(pairs[0]).size == pairs.shape[1]


def test_ambient_and_full_aut_agree_on_a5(A5):
    amb = pair_census(A5, automorphism_source="ambient")
    full = pair_census(A5, automorphism_source="search")
    assert (amb.t2_systems, amb.aut_orbits) == (full.t2_systems, full.aut_orbits) == (2, 19)


def test_ambient_only_undercounts_a6_orbits(A6):
    # S6 conjugation alone is a proper subgroup of Aut(A6): orbits can only split
    amb = pair_census(A6, automorphism_source="ambient")
    assert amb.aut_orbits > 53


def test_commutator_class_is_t2_invariant(A5):
    pairs = generating_pairs(A5)
    auts = automorphisms(A5)
    _, label = brute_orbits(A5, pairs, auts, True)
    types = {}
    for (a, b), lab in label.items():
        types.setdefault(lab, set()).add(A5.cycle_type(A5.commutator(a, b)))
    assert all(len(t) == 1 for t in types.values())


def test_refuses_large_census_without_flag():
    with pytest.raises(Refused):
        alternating_census(7)


def test_csv_row_format():
    c = alternating_census(4)
    assert c.csv_row(with_time=False)[-1] == ""
    assert c.csv_row()[:3] == ["A4", "12", "96"]


def test_every_nontrivial_even_type_is_a_commutator_of_a_generating_pair_of_a7():
    """Each nontrivial even cycle type of S7 occurs; generation is checked by
    plain closure and the commutator by direct composition."""
    n = 7
    wanted = {
        oracles.cycle_type(p)
        for p in itertools.permutations(range(n))
        if oracles.sign(p) == 1 and oracles.cycle_type(p)
    }
    assert len(wanted) == 7
    evens = oracles.alternating_elements(n)
    rng = np.random.default_rng(7)
    found = {}
    while len(found) < len(wanted):
        a, b = (evens[i] for i in rng.integers(0, len(evens), 2))
        t = oracles.cycle_type(oracles.commutator(a, b))
        if t in found:
            continue
        if len(oracles.group_elements([a, b], n)) == 2520:
            found[t] = (a, b)
    assert set(found) == wanted
