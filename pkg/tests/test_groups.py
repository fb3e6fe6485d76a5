import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from permcomm.errors import (
    DegreeMismatch,
    InvalidWindow,
    NotTransitive,
    OrderCapExceeded,
    PreconditionViolated,
)
from permcomm.groups import (
    block_system,
    classify_by_closure,
    closure_order,
    is_prime,
    is_primitive,
    is_transitive,
    jordan_classify,
    orbits,
    primitivity_shortcut,
    transitivity_criterion,
)
from permcomm.perm import Permutation, cycle, parse_cycles


def P(text, n):
    return parse_cycles(text, n)


def test_orbit_examples():
    assert sorted(map(sorted, orbits([P("(1 2 3)", 5)], 5).orbits())) == [[1, 2, 3], [4], [5]]
    assert orbits([], 4).count == 4
    assert orbits([P("(1 2)", 5), P("(2 3 4 5)", 5)], 5).transitive


def test_orbits_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        orbits([P("(1 2)", 3)], 4)


@settings(max_examples=500, deadline=None)
@given(st.integers(1, 10), st.data())
def test_orbits_match_bfs(n, data):
    k = data.draw(st.integers(0, 3))
    gens = [Permutation(data.draw(st.permutations(list(range(n))))) for _ in range(k)]
    part = orbits(gens, n)
    assert part.count == oracles.orbit_count([g.images for g in gens], n)
    # same id iff reachable
    for o in part.orbits():
        x = min(o)
        ids = {part.orbit_id[y - 1] for y in o}
        assert len(ids) == 1 and part.orbit_id[x - 1] in ids


def test_transitivity_criterion_examples():
    assert transitivity_criterion(3, 5, P("(3 4 5)", 5))
    assert not transitivity_criterion(3, 5, P("(4 5)", 5))
    assert not transitivity_criterion(3, 5, P("(1 4)", 5))
    for p in (1, 5, 6):
        with pytest.raises(InvalidWindow):
            transitivity_criterion(p, 5, P("(1 2)", 5))


def test_transitivity_criterion_exhaustive_small():
    for n in range(4, 6):
        for p in range(2, n):
            sigma = cycle(range(1, p + 1), n)
            for images in itertools.permutations(range(n)):
                tau = Permutation(images)
                expected = oracles.orbit_count([sigma.images, tau.images], n) == 1
                assert transitivity_criterion(p, n, tau) == expected


def _is_block_system(bs, gens):
    blocks = bs.blocks()
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1 or bs.degree % sizes.pop():
        return False
    as_sets = [frozenset(b) for b in blocks]
    for g in gens:
        for b in as_sets:
            if frozenset(g(x) for x in b) not in as_sets:
                return False
    return True


def test_block_examples():
    c4 = [P("(1 2 3 4)", 4)]
    ok, witness = is_primitive(c4, 4)
    assert not ok
    assert sorted(map(sorted, witness.blocks())) == [[1, 3], [2, 4]]
    assert _is_block_system(witness, c4)
    assert is_primitive([P("(1 2 3)", 4), P("(2 3 4)", 4)], 4) == (True, None)
    assert is_primitive([P("(1 2 3 4 5)", 5)], 5)[0]


def test_block_system_rejects_intransitive():
    with pytest.raises(NotTransitive):
        block_system([P("(1 2)", 4)], 4, (1, 2))
    with pytest.raises(NotTransitive):
        is_primitive([P("(1 2)", 4)], 4)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 9), st.data())
def test_imprimitivity_witness_is_valid(n, data):
    gens = [Permutation(data.draw(st.permutations(list(range(n))))) for _ in range(2)]
    if not is_transitive(gens, n):
        return
    ok, witness = is_primitive(gens, n)
    if ok:
        # every pair of points generates the whole set as a block
        for y in range(2, n + 1):
            assert block_system(gens, n, (1, y)).trivial
    else:
        assert 1 < witness.block_size < n and n % witness.block_size == 0
        assert _is_block_system(witness, gens)


def test_primitivity_shortcut_examples():
    assert primitivity_shortcut([P("(1 2 3 4 5)", 5)], 5, 5)
    tau = P("(1 6 7 8 9)(2 3)", 9)
    gens = [P("(1 2 3 4 5)", 9), tau]
    assert is_transitive(gens, 9)
    assert primitivity_shortcut(gens, 9, 5) and is_primitive(gens, 9)[0]
    with pytest.raises(PreconditionViolated):
        primitivity_shortcut([P("(1 2 3)", 9)], 9, 3)
    with pytest.raises(PreconditionViolated):
        primitivity_shortcut([P("(1 2 3 4 5 6 7 8 9)", 9)], 9, 9)
    with pytest.raises(PreconditionViolated):
        primitivity_shortcut([P("(1 2 3 4 5)", 9)], 9, 5)


def test_primitivity_shortcut_agrees_with_block_search():
    rng = random.Random(3)
    checked = 0
    for n in range(5, 12):
        for p in [q for q in range(n // 2 + 1, n + 1) if is_prime(q)]:
            sigma = cycle(range(1, p + 1), n)
            for _ in range(60):
                images = list(range(n))
                rng.shuffle(images)
                gens = [sigma, Permutation(images)]
                if not is_transitive(gens, n):
                    continue
                assert primitivity_shortcut(gens, n, p) == is_primitive(gens, n)[0]
                checked += 1
    assert checked > 200


def test_jordan_examples_match_closure():
    n = 10
    sigma = cycle(range(1, 8), n)
    even = P("(1 8 9 10)(2 3)", n)
    odd = P("(1 8 9 10)", n)
    assert jordan_classify([sigma, even], n, sigma).kind == "Alternating"
    assert jordan_classify([sigma, odd], n, sigma).kind == "Symmetric"
    assert closure_order([sigma, even], n) == 1_814_400
    assert closure_order([sigma, odd], n) == 3_628_800


def test_jordan_preconditions():
    s4 = [P("(1 2)", 4), P("(1 2 3 4)", 4)]
    for w in s4:
        with pytest.raises(PreconditionViolated):
            jordan_classify(s4, 4, w)
    sigma = cycle(range(1, 8), 10)
    with pytest.raises(PreconditionViolated):
        jordan_classify([sigma], 10, sigma)  # intransitive
    with pytest.raises(PreconditionViolated):
        jordan_classify([sigma, P("(1 8 9 10)", 10)], 10, P("(1 2 3)", 10))


def test_jordan_against_closure_random():
    rng = random.Random(11)
    seen = set()
    for n in range(8, 11):
        for p in [q for q in range(n // 2 + 1, n - 2) if is_prime(q)]:
            sigma = cycle(range(1, p + 1), n)
            for _ in range(6):
                images = list(range(n))
                rng.shuffle(images)
                gens = [sigma, Permutation(images)]
                if not is_transitive(gens, n):
                    continue
                kind = jordan_classify(gens, n, sigma).kind
                order = closure_order(gens, n)
                assert order == (math.factorial(n) // 2 if kind == "Alternating" else math.factorial(n))
                seen.add(kind)
    assert seen == {"Alternating", "Symmetric"}


def test_closure_examples():
    assert closure_order([P("(1 2 3)", 3)], 3) == 3
    assert closure_order([P("(1 2)", 3), P("(1 2 3)", 3)], 3) == 6
    assert closure_order([P("(1 2 3)", 5), P("(3 4 5)", 5)], 5) == 60
    assert closure_order([], 4) == 1


def test_closure_cap():
    with pytest.raises(OrderCapExceeded):
        closure_order([P("(1 2)", 6), P("(1 2 3 4 5 6)", 6)], 6, cap=100)


def test_closure_against_bfs_oracle():
    rng = random.Random(5)
    for n in range(3, 8):
        for _ in range(10):
            gens = []
            for _ in range(2):
                images = list(range(n))
                rng.shuffle(images)
                gens.append(Permutation(images))
            expected = len(oracles.group_elements([g.images for g in gens], n))
            assert closure_order(gens, n) == expected


def test_closure_large_degree_path():
    # degree above the ranked bitmap range uses the hashed fallback
    n = 14
    gens = [cycle(range(1, 8), n), cycle(range(8, 15), n)]
    assert closure_order(gens, n) == 49
    assert classify_by_closure([P("(1 2 3)", 5), P("(3 4 5)", 5)], 5).kind == "Alternating"
