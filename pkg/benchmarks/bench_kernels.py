"""Time each hot kernel in its numba and numpy flavour on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

The first numba call of each kernel is reported separately (JIT compile or
cache load); the table shows the best of ``--repeat`` warm runs.
"""
import argparse
import itertools
import time

import numpy as np

from permcomm import _kernels as K
from permcomm.t2 import (
    _spanning_tree,
    alternating_generators,
    automorphism_generators,
    build_small_group,
    generating_mask,
)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(quick):
    G = build_small_group(alternating_generators(5 if quick else 6), 5 if quick else 6)
    m = G.order
    mask = generating_mask(G)
    auts = np.array(automorphism_generators(G), dtype=np.int64).reshape(-1, m)
    gens = np.array(G.gen_indices, dtype=np.int64)
    tree = _spanning_tree(G, gens)
    pools = [np.nonzero(G.orders == G.orders[s])[0] for s in gens]
    cands = np.array(list(itertools.product(*pools)), dtype=np.int64)[:4096]

    n = 8 if quick else 9
    closure_gens = np.array([[1, 0] + list(range(2, n)), list(range(1, n)) + [0]], dtype=np.int64)

    rng = np.random.default_rng(0)
    mu = rng.permutation(30).astype(np.int64)
    rows = np.array([rng.permutation(30)[:23] for _ in range(4096)], dtype=np.int64)

    return [
        (f"closure_ranked S{n}", lambda f: f(closure_gens, 10**7), "closure_ranked"),
        ("first_cycle_match 4096x23", lambda f: f(rows, mu), "first_cycle_match"),
        (f"generates_with |G|={m}", lambda f: f(G.mul, int(G.gen_indices[0])), "generates_with"),
        (f"pair_orbit_labels |G|={m}", lambda f: f(G.mul, G.inv, mask, auts, True), "pair_orbit_labels"),
        (f"extend_images {cands.shape[0]} cands", lambda f: f(G.mul, gens, tree, cands), "extend_images"),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args()

    print(f"active backend: {K.BACKEND}")
    if not K.HAVE_NUMBA:
        print("numba is not installed; only the numpy column is timed")
    print(f"{'kernel':<32}{'numpy/s':>10}{'numba/s':>10}{'first/s':>10}{'speedup':>9}")
    for label, call, name in cases(args.quick):
        np_fn = getattr(K, name + "_numpy")
        t_np = best_of(lambda: call(np_fn), args.repeat)
        if K.HAVE_NUMBA:
            nb_fn = getattr(K, name + "_numba")
            t0 = time.perf_counter()
            call(nb_fn)
            first = time.perf_counter() - t0
            t_nb = best_of(lambda: call(nb_fn), args.repeat)
            print(f"{label:<32}{t_np:>10.4f}{t_nb:>10.4f}{first:>10.3f}{t_np / t_nb:>8.1f}x")
        else:
            print(f"{label:<32}{t_np:>10.4f}{'-':>10}{'-':>10}{'-':>9}")


if __name__ == "__main__":
    main()
