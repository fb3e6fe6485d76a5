"""Write an even permutation as ``[sigma, tau_even] = [sigma, tau_odd]``.

``sigma`` is a p-cycle for a prime p in ``[floor(3n/4), n - 3]``; the pair
``(sigma, tau_even)`` generates A_n and ``(sigma, tau_odd)`` generates S_n.
The construction runs in five recorded steps:

1. ``bertram``: split ``mu = c1 * c2`` into two p-cycles by search.
2. ``canonicalize``: relabel so ``c1 = (1 2 ... p)`` and build ``tau`` with
   ``tau * c1^-1 * tau^-1 = c2``, hence ``mu = [c1, tau]``.
3. ``prune``: drop cycles of ``tau`` living entirely above ``p``.
4. ``absorb``: fold the fixed points above ``p`` into a cycle of ``tau``.
5. ``parity_toggle``: pair ``tau`` with ``tau * (y y')`` of opposite parity.

Every step keeps the commutator with ``(1 ... p)`` unchanged; this is
asserted as the pipeline runs.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional

import numpy as np

from . import _kernels
from .errors import (
    InsufficientSupport,
    InvalidWindow,
    LengthMismatch,
    NotEvenPermutation,
    PreconditionViolated,
    SearchExhausted,
    UnsupportedDegree,
)
from .groups import (
    closure_order,
    is_prime,
    is_transitive,
    jordan_classify,
    primitivity_shortcut,
)
from .perm import (
    CycleForm,
    Permutation,
    commutator,
    compose,
    cycle,
    cycle_decomposition,
    format_cycles,
    invert,
    parse_cycles,
    parity,
)

EXHAUSTIVE_MAX_DEGREE = 8
DEFAULT_TRIAL_CAP = 10**7
_BATCH = 4096
# n! must stay under the default closure cap for deep verification
DEEP_MAX_DEGREE = 10


# --------------------------------------------------------------------------
# prime window


@dataclass(frozen=True)
class PrimeWindow:
    n: int
    lo: int
    hi: int
    p: Optional[int]


def primes_upto(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=np.bool_)
    sieve[:2] = False
    for k in range(2, int(limit**0.5) + 1):
        if sieve[k]:
            sieve[k * k :: k] = False
    return np.nonzero(sieve)[0]


def prime_in_window(n: int) -> PrimeWindow:
    """Smallest prime in ``[floor(3n/4), n - 3]``, or ``p=None`` if there is none."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lo, hi = 3 * n // 4, n - 3
    primes = primes_upto(hi)
    inside = primes[primes >= lo]
    return PrimeWindow(n, lo, hi, int(inside[0]) if inside.size else None)


# --------------------------------------------------------------------------
# two l-cycles


def _all_cycles(n: int, l: int):
    """Every l-cycle on ``range(n)`` once, as point sequences starting at the minimum."""
    for subset in itertools.combinations(range(n), l):
        head, rest = subset[0], subset[1:]
        for tail in itertools.permutations(rest):
            yield (head, *tail)


def _batched(it, size):
    while True:
        chunk = list(itertools.islice(it, size))
        if not chunk:
            return
        yield chunk


def two_lcycle_decompose(
    mu: Permutation,
    l: int,
    seed: int = 0,
    trial_cap: int = DEFAULT_TRIAL_CAP,
    strategy: Optional[str] = None,
) -> Optional[tuple[Permutation, Permutation]]:
    """Find l-cycles ``c1, c2`` with ``c1 * c2 == mu``.

    ``strategy`` is ``"exhaustive"`` (default for n <= 8) or ``"random"``.
    Exhaustive search returns ``None`` when no decomposition exists; random
    search raises :class:`SearchExhausted` after ``trial_cap`` candidates.
    """
    n = mu.degree
    if parity(mu) != "even":
        raise NotEvenPermutation(f"{format_cycles(mu)} is odd")
    if not 2 <= l <= n:
        raise ValueError(f"cycle length {l} outside 2..{n}")
    if strategy is None:
        strategy = "exhaustive" if n <= EXHAUSTIVE_MAX_DEGREE else "random"
    mu_arr = mu.to_array()

    if strategy == "exhaustive":
        for chunk in _batched(_all_cycles(n, l), _BATCH):
            cands = np.array(chunk, dtype=np.int64)
            hit = _kernels.first_cycle_match(cands, mu_arr)
            if hit >= 0:
                return _split(mu, cands[hit])
        return None
    if strategy != "random":
        raise ValueError(f"unknown strategy {strategy!r}")

    rng = np.random.default_rng(seed)
    base = np.tile(np.arange(n, dtype=np.int64), (_BATCH, 1))
    trials = 0
    while trials < trial_cap:
        size = min(_BATCH, trial_cap - trials)
        cands = rng.permuted(base[:size], axis=1)[:, :l]
        trials += size
        hit = _kernels.first_cycle_match(cands, mu_arr)
        if hit >= 0:
            return _split(mu, cands[hit])
    raise SearchExhausted(f"no pair of {l}-cycles found in {trial_cap} trials")


def _split(mu: Permutation, points) -> tuple[Permutation, Permutation]:
    c1 = cycle([int(x) + 1 for x in points], mu.degree)
    c2 = compose(invert(c1), mu)
    return c1, c2


# --------------------------------------------------------------------------
# proof steps


def _cycle_points(c: Permutation) -> tuple[int, ...]:
    form = cycle_decomposition(c)[0]
    if len(form.cycles) != 1:
        raise ValueError(f"{format_cycles(c)} is not a single cycle")
    return form.cycles[0]


def conjugator_for_cycles(c1: Permutation, c2: Permutation, n: int, rotation: int = 0) -> Permutation:
    """A permutation ``tau`` with ``tau * c1 * tau^-1 == c2``.

    With ``c1 = (a_1 ... a_l)`` and ``c2 = (b_1 ... b_l)`` written from their
    minimum points, ``tau`` sends ``a_i`` to ``b_{i + rotation}``; the points
    off both supports are matched in increasing order.
    """
    if c1.degree != n or c2.degree != n:
        raise ValueError(f"cycles must have degree {n}")
    a, b = _cycle_points(c1), _cycle_points(c2)
    l = len(a)
    if len(b) != l:
        raise LengthMismatch(f"cycle lengths differ: {l} vs {len(b)}")
    if not 0 <= rotation < l:
        raise ValueError(f"rotation {rotation} outside 0..{l - 1}")
    images = [0] * n
    for i, x in enumerate(a):
        images[x - 1] = b[(i + rotation) % l] - 1
    rest_a = sorted(set(range(1, n + 1)) - set(a))
    rest_b = sorted(set(range(1, n + 1)) - set(b))
    for x, y in zip(rest_a, rest_b):
        images[x - 1] = y - 1
    tau = Permutation(images)
    if c1.conjugate_by(tau) != c2:
        raise AssertionError("conjugator construction failed")
    return tau


def prune_tail_cycles(tau: Permutation, p: int) -> tuple[Permutation, CycleForm]:
    """Remove the cycles of ``tau`` that move only points above ``p``."""
    n = tau.degree
    if not 1 <= p < n:
        raise ValueError(f"need 1 <= p < n, got p={p}, n={n}")
    form = cycle_decomposition(tau)[0]
    keep = tuple(c for c in form.cycles if c[0] <= p)
    removed = tuple(c for c in form.cycles if c[0] > p)
    return CycleForm(n, keep).to_permutation(), CycleForm(n, removed)


def _exits(tau: Permutation, p: int) -> list[int]:
    """1-based points ``x <= p`` with ``tau(x) > p``, increasing."""
    return [x for x in range(1, p + 1) if tau.image(x) > p]


def absorb_fixed_points(tau: Permutation, p: int) -> Permutation:
    """Return ``tau * (y y_1 ... y_s)`` where ``y = tau(x)`` for the smallest
    ``x <= p`` leaving ``{1..p}`` and ``y_1 < ... < y_s`` are the fixed points
    of ``tau`` above ``p``."""
    n = tau.degree
    exits = _exits(tau, p)
    if not exits:
        raise InsufficientSupport(f"no point of 1..{p} is sent above {p}")
    if any(c[0] > p for c in cycle_decomposition(tau)[0].cycles):
        raise PreconditionViolated("tau has a cycle avoiding 1..p; prune it first")
    y = tau.image(exits[0])
    tail = sorted(z for z in range(p + 1, n + 1) if tau.image(z) == z)
    if not tail:
        return tau
    return compose(tau, cycle([y, *tail], n))


def parity_partner(tau: Permutation, p: int) -> tuple[Permutation, Permutation, Permutation]:
    """Return ``(tau_even, tau_odd, (y y'))`` from ``{tau, tau * (y y')}``.

    ``y = tau(x)``, ``y' = tau(x')`` for the two smallest ``x < x' <= p``
    that ``tau`` sends above ``p``.
    """
    exits = _exits(tau, p)
    if len(exits) < 2:
        raise InsufficientSupport(f"fewer than two points of 1..{p} are sent above {p}")
    y, y2 = tau.image(exits[0]), tau.image(exits[1])
    t = cycle([y, y2], tau.degree)
    partner = compose(tau, t)
    if parity(tau) == "even":
        return tau, partner, t
    return partner, tau, t


# --------------------------------------------------------------------------
# certificate


CHECK_NAMES = (
    "commutator_even",
    "commutator_odd",
    "sigma_is_p_cycle",
    "parities",
    "transposition_quotient",
    "transitive_even",
    "transitive_odd",
    "primitive",
    "class_even",
    "class_odd",
)


@dataclass
class DecompositionCertificate:
    n: int
    p: int
    mu: Permutation
    sigma: Permutation
    tau_even: Permutation
    tau_odd: Permutation
    transposition: Permutation
    seed: int
    checks: dict[str, bool] = field(default_factory=dict)
    trace: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        # key order is part of the output format
        return {
            "n": self.n,
            "p": self.p,
            "mu": format_cycles(self.mu),
            "sigma": format_cycles(self.sigma),
            "tau_even": format_cycles(self.tau_even),
            "tau_odd": format_cycles(self.tau_odd),
            "transposition": format_cycles(self.transposition),
            "seed": self.seed,
            "checks": {k: bool(v) for k, v in self.checks.items()},
            "trace": self.trace,
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> DecompositionCertificate:
        n = int(data["n"])

        def perm(key):
            return parse_cycles(data[key], n)

        return cls(
            n=n,
            p=int(data["p"]),
            mu=perm("mu"),
            sigma=perm("sigma"),
            tau_even=perm("tau_even"),
            tau_odd=perm("tau_odd"),
            transposition=perm("transposition"),
            seed=int(data.get("seed", 0)),
            checks=dict(data.get("checks", {})),
            trace=list(data.get("trace", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> DecompositionCertificate:
        return cls.from_dict(json.loads(text))


def _class_kind(gens, n, witness) -> Optional[str]:
    try:
        return jordan_classify(gens, n, witness).kind
    except PreconditionViolated:
        return None


def verify_certificate(cert: DecompositionCertificate, deep: bool = False) -> dict[str, bool]:
    """Recompute every check from the raw permutations.

    Stored ``cert.checks`` are ignored. With ``deep=True`` and ``n <= 10`` the
    generated groups are also enumerated (``closure_verified``).
    """
    n, p = cert.n, cert.p
    sigma, te, to, mu = cert.sigma, cert.tau_even, cert.tau_odd, cert.mu
    if any(x.degree != n for x in (sigma, te, to, mu, cert.transposition)):
        return {name: False for name in CHECK_NAMES}
    quotient = compose(invert(te), to)
    report = {
        "commutator_even": commutator(sigma, te) == mu,
        "commutator_odd": commutator(sigma, to) == mu,
        "sigma_is_p_cycle": sigma.is_cycle(p),
        "parities": parity(te) == "even" and parity(to) == "odd",
        "transposition_quotient": quotient.cycle_type() == (2,) and quotient == cert.transposition,
        "transitive_even": is_transitive([sigma, te], n),
        "transitive_odd": is_transitive([sigma, to], n),
    }
    try:
        report["primitive"] = primitivity_shortcut([sigma, te], n, p) and primitivity_shortcut(
            [sigma, to], n, p
        )
    except PreconditionViolated:
        report["primitive"] = False
    report["class_even"] = _class_kind([sigma, te], n, sigma) == "Alternating"
    report["class_odd"] = _class_kind([sigma, to], n, sigma) == "Symmetric"
    if deep and n <= DEEP_MAX_DEGREE:
        full = factorial(n)
        report["closure_verified"] = (
            closure_order([sigma, te], n) == full // 2 and closure_order([sigma, to], n) == full
        )
    return report


# --------------------------------------------------------------------------
# pipeline


def _fmt(**perms) -> dict[str, str]:
    return {k: (str(v) if isinstance(v, CycleForm) else format_cycles(v)) for k, v in perms.items()}


def _choose_p(n: int, force_p: Optional[int]) -> int:
    window = prime_in_window(n)
    if force_p is None:
        if window.p is None:
            raise UnsupportedDegree(f"no prime in [{window.lo}, {window.hi}] for n={n}")
        return window.p
    if not (is_prime(force_p) and window.lo <= force_p <= window.hi):
        raise InvalidWindow(f"forced p={force_p} is not a prime in [{window.lo}, {window.hi}]")
    return force_p


def run_pipeline(
    mu: Permutation,
    seed: int = 0,
    force_p: Optional[int] = None,
    verify_closure: bool = False,
    trial_cap: int = DEFAULT_TRIAL_CAP,
) -> DecompositionCertificate:
    n = mu.degree
    if n < 10:
        raise UnsupportedDegree(f"degree {n} < 10")
    if parity(mu) != "even":
        raise NotEvenPermutation(f"{format_cycles(mu)} is odd")
    p = _choose_p(n, force_p)
    moved = len(mu.support)
    if moved < p + 2:
        raise InsufficientSupport(f"mu moves {moved} points, needs at least p + 2 = {p + 2}")

    trace = []
    c1, c2 = two_lcycle_decompose(mu, p, seed=seed, trial_cap=trial_cap)
    trace.append({"step": "bertram", "before": _fmt(mu=mu), "after": _fmt(sigma=c1, c2=c2)})

    sigma_c = cycle(range(1, p + 1), n)
    relabel = conjugator_for_cycles(c1, sigma_c, n)
    mu_c = mu.conjugate_by(relabel)
    tau = conjugator_for_cycles(invert(sigma_c), c2.conjugate_by(relabel), n)
    _expect(commutator(sigma_c, tau) == mu_c, "canonicalize")
    trace.append({
        "step": "canonicalize",
        "before": _fmt(sigma=c1, mu=mu),
        "after": _fmt(sigma=sigma_c, mu=mu_c, tau=tau, relabel=relabel),
    })

    pruned, removed = prune_tail_cycles(tau, p)
    _expect(commutator(sigma_c, pruned) == mu_c, "prune")
    trace.append({"step": "prune", "before": _fmt(tau=tau), "after": _fmt(tau=pruned, removed=removed)})

    absorbed = absorb_fixed_points(pruned, p)
    _expect(commutator(sigma_c, absorbed) == mu_c, "absorb")
    trace.append({"step": "absorb", "before": _fmt(tau=pruned), "after": _fmt(tau=absorbed)})

    te, to, t = parity_partner(absorbed, p)
    _expect(commutator(sigma_c, te) == mu_c and commutator(sigma_c, to) == mu_c, "parity_toggle")
    trace.append({
        "step": "parity_toggle",
        "before": _fmt(tau=absorbed),
        "after": _fmt(tau_even=te, tau_odd=to, transposition=t),
    })

    back = invert(relabel)
    cert = DecompositionCertificate(
        n=n,
        p=p,
        mu=mu,
        sigma=sigma_c.conjugate_by(back),
        tau_even=te.conjugate_by(back),
        tau_odd=to.conjugate_by(back),
        transposition=t.conjugate_by(back),
        seed=seed,
        trace=trace,
    )
    cert.checks = verify_certificate(cert, deep=verify_closure)
    return cert


def _expect(ok: bool, step: str) -> None:
    if not ok:
        raise AssertionError(f"commutator changed during step {step!r}")


# --------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class CoverageResult:
    n: int
    p: int
    trials: int
    covered: int
    certificates_ok: int
    fraction_covered: Fraction
    exact_fraction: Fraction

    @property
    def all_certified(self) -> bool:
        return self.certificates_ok == self.covered


def random_even_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """Uniform element of A_n: shuffle, and reshuffle while odd."""
    while True:
        perm = Permutation(rng.permutation(n).tolist(), check=False)
        if parity(perm) == "even":
            return perm


def sample_coverage(n: int, trials: int, seed: int, deep: bool = False) -> CoverageResult:
    """Share of uniform random elements of A_n moving at least ``p + 2``
    points, each covered one pushed through :func:`run_pipeline` and verified."""
    from .counting import even_fixing_at_most

    window = prime_in_window(n)
    if n < 10 or window.p is None:
        raise UnsupportedDegree(f"no usable prime window for n={n}")
    p = window.p
    rng = np.random.default_rng(seed)
    covered = ok = 0
    for _ in range(trials):
        mu = random_even_permutation(n, rng)
        run_seed = int(rng.integers(2**31))
        if len(mu.support) < p + 2:
            continue
        covered += 1
        cert = run_pipeline(mu, seed=run_seed)
        if all(verify_certificate(cert, deep=deep).values()):
            ok += 1
    exact = Fraction(even_fixing_at_most(n, n - p - 2), factorial(n) // 2)
    return CoverageResult(n, p, trials, covered, ok, Fraction(covered, trials) if trials else Fraction(0), exact)
