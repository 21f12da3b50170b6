"""Shared generators and brute-force oracles for the test suite.

The oracles deliberately avoid the library's own lattice machinery: they
enumerate all 2^|F| predicate subsets and reason over full truth vectors,
so they stay correct even if the code under test is wrong.
"""

from __future__ import annotations

import random
from itertools import product

from predlearn import TableFamily, evaluate_set
from predlearn.varineq import has_cycle


def random_table_family(rng: random.Random, max_preds: int = 5, max_points: int = 8) -> TableFamily:
    n_points = rng.randint(1, max_points)
    n_preds = rng.randint(1, max_preds)
    points = [(p,) for p in range(n_points)]
    rows = [[rng.randint(0, 1) for _ in range(n_points)] for _ in range(n_preds)]
    return TableFamily(points, rows)


def truth_vector(family: TableFamily, subset, mode: str) -> tuple:
    return tuple(evaluate_set(family, subset, p, mode) for p in family.points)


def brute_representatives(family: TableFamily, mode: str) -> dict:
    """Map truth vector -> the maximal subset realizing it.

    The representative of a function is the set of all predicates whose
    join with the function leaves it unchanged, i.e. column <= vector in
    or-mode and column >= vector in and-mode.
    """
    cols = [truth_vector(family, (i,), mode) for i in range(family.size)]
    out = {}
    for bits in product((0, 1), repeat=family.size):
        s = tuple(i for i in range(family.size) if bits[i])
        vec = truth_vector(family, s, mode)
        if vec in out:
            continue
        if mode == "or":
            rep = tuple(i for i in range(family.size) if all(c <= v for c, v in zip(cols[i], vec)))
        else:
            rep = tuple(i for i in range(family.size) if all(c >= v for c, v in zip(cols[i], vec)))
        out[vec] = rep
    return out


def _leq(v1: tuple, v2: tuple) -> bool:
    return all(a <= b for a, b in zip(v1, v2))


def brute_hasse_edges(family: TableFamily, mode: str):
    """(parent_rep, child_rep) cover pairs under pointwise implication."""
    reps = brute_representatives(family, mode)
    vecs = list(reps)
    below = lambda a, b: _leq(a, b) if mode == "or" else _leq(b, a)  # noqa: E731
    edges = []
    for p in vecs:
        for c in vecs:
            if c == p or not below(c, p):
                continue
            if any(m not in (p, c) and below(c, m) and below(m, p) for m in vecs):
                continue
            edges.append((reps[p], reps[c]))
    return reps, edges


def brute_imm_descendants(family: TableFamily, rep, mode: str):
    reps, edges = brute_hasse_edges(family, mode)
    return sorted(c for p, c in edges if p == tuple(rep))


def random_acyclic_pairs(rng: random.Random, n: int, max_edges: int = 8):
    order = list(range(1, n + 1))
    rng.shuffle(order)
    rank = {v: i for i, v in enumerate(order)}
    candidates = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j and rank[i] < rank[j]
    ]
    rng.shuffle(candidates)
    k = rng.randint(1, min(max_edges, len(candidates)))
    pairs = sorted(candidates[:k])
    assert not has_cycle(pairs)
    return pairs


def random_digraph_pairs(rng: random.Random, n: int, max_edges: int = 12):
    candidates = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    rng.shuffle(candidates)
    k = rng.randint(1, min(max_edges, len(candidates)))
    return sorted(candidates[:k])
