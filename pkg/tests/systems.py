"""Hand-written and randomly generated systems shared by the tests."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction as F

from contextuality import Bunch, System, make_system, marginal

HALF = F(1, 2)


def example1_layout():
    return {
        "c1": ["q1", "q2"],
        "c2": ["q2", "q3", "q4"],
        "c3": ["q1", "q3"],
        "c4": ["q1", "q4"],
        "c5": ["q1", "q2", "q3"],
    }


# fixed full-support global pmf over (q1, q2, q3, q4); weights sum to 48
_EXAMPLE1_WEIGHTS = [1, 2, 3, 4, 5, 1, 2, 3, 4, 5, 1, 2, 3, 4, 5, 3]


def global_pmf(contents, weights):
    total = sum(weights)
    atoms = itertools.product((-1, 1), repeat=len(contents))
    return {a: F(w, total) for a, w in zip(atoms, weights) if w}


def marginals_system(contents, layout, joint):
    """System whose bunches are the marginals of one global pmf."""
    full = Bunch("global", tuple(contents), joint)
    return make_system(contents, {c: (qs, marginal(full, qs)) for c, qs in layout.items()})


def example1():
    contents = ["q1", "q2", "q3", "q4"]
    return marginals_system(contents, example1_layout(),
                            global_pmf(contents, _EXAMPLE1_WEIGHTS))


def c2(pmf1, pmf2):
    return make_system(["q1", "q2"], {"c1": (["q1", "q2"], pmf1),
                                      "c2": (["q1", "q2"], pmf2)})


def c2_1():
    return c2({"+-": 1}, {"+-": 1})


def c2_2():
    return c2({"+-": 1}, {"++": 1})


def pr2():
    """Rank-2 cyclic system, uniform marginals, correlations +1 and -1."""
    return c2({"++": HALF, "--": HALF}, {"+-": HALF, "-+": HALF})


# --- random generators -------------------------------------------------------

def random_layout(rng: random.Random, max_q=4, max_c=4, min_q=1, min_c=1):
    while True:
        nq = rng.randint(min_q, max_q)
        nc = rng.randint(min_c, max_c)
        contents = [f"q{i}" for i in range(1, nq + 1)]
        layout = {}
        for i in range(1, nc + 1):
            k = rng.randint(1, nq)
            chosen = set(rng.sample(contents, k))
            layout[f"c{i}"] = [q for q in contents if q in chosen]
        if set().union(*map(set, layout.values())) == set(contents):
            return contents, layout


def random_deterministic(rng: random.Random, max_q=4, max_c=4) -> System:
    contents, layout = random_layout(rng, max_q, max_c)
    return make_system(contents, {
        c: (qs, {tuple(rng.choice((-1, 1)) for _ in qs): 1}) for c, qs in layout.items()})


def random_weights(rng, n, lo=0, hi=4):
    while True:
        w = [rng.randint(lo, hi) for _ in range(2 ** n)]
        if sum(w):
            return w


def pr_component(rng: random.Random, layout):
    """Per-context PR-style bunches: uniform over the tuples whose product is
    a context-specific sign (uniform for single-variable contexts)."""
    out = {}
    for c, qs in layout.items():
        sign = rng.choice((-1, 1))
        tuples = [o for o in itertools.product((-1, 1), repeat=len(qs))
                  if len(qs) == 1 or _prod(o) == sign]
        out[c] = {o: F(1, len(tuples)) for o in tuples}
    return out


def _prod(o):
    p = 1
    for v in o:
        p *= v
    return p


def mix(lam, pmf_a, pmf_b):
    keys = set(pmf_a) | set(pmf_b)
    return {k: lam * pmf_a.get(k, 0) + (1 - lam) * pmf_b.get(k, 0) for k in keys}


LAMBDAS = [F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(3, 4), F(1)]


def random_consistent_mixture(rng: random.Random, max_q=4, max_c=4):
    """λ·(marginals of a random global pmf) + (1-λ)·(PR-style bunches).

    Returns (system, λ).  Single-variable marginals are 1/2 in the PR part
    and context-independent in the global part, so the mixture is
    consistently connected."""
    contents, layout = random_layout(rng, max_q, max_c)
    joint = global_pmf(contents, random_weights(rng, len(contents)))
    glob = marginals_system(contents, layout, joint)
    pr = pr_component(rng, layout)
    lam = rng.choice(LAMBDAS)
    system = make_system(contents, {
        b.context: (b.contents, mix(lam, dict(b.pmf), pr[b.context]))
        for b in glob.bunches})
    return system, lam


def random_simple_not_strong(rng: random.Random, max_q=4, max_c=4) -> System:
    """Simply but not strongly consistently connected.

    Two contexts both hold q_a and q_b.  One of them gets the marginals of
    G' = G + e·x_a·x_b/T, which keeps every single-variable marginal of the
    global pmf G but shifts the (q_a, q_b) correlation by e·2^n/T."""
    nq = rng.randint(2, max_q)
    contents = [f"q{i}" for i in range(1, nq + 1)]
    a, b = sorted(rng.sample(range(nq), 2))
    nc = rng.randint(2, max_c)
    while True:
        layout = {}
        for i in range(1, nc + 1):
            chosen = set(rng.sample(contents, rng.randint(1, nq)))
            if i <= 2:
                chosen |= {contents[a], contents[b]}
            layout[f"c{i}"] = [q for q in contents if q in chosen]
        if set().union(*map(set, layout.values())) == set(contents):
            break
    weights = random_weights(rng, nq, lo=1, hi=5)
    total = sum(weights)
    e = rng.choice((-1, 1))
    atoms = list(itertools.product((-1, 1), repeat=nq))
    g = {x: F(w, total) for x, w in zip(atoms, weights)}
    g2 = {x: F(w + e * x[a] * x[b], total) for x, w in zip(atoms, weights)}
    full = Bunch("g", tuple(contents), g)
    full2 = Bunch("g2", tuple(contents), g2)
    return make_system(contents, {
        c: (qs, marginal(full2 if c == "c2" else full, qs)) for c, qs in layout.items()})
