"""Random generators for complexes, fields, index pairs and zigzag modules."""

from __future__ import annotations

import itertools
import random

import numpy as np

from conleymorse.complex import SimplicialComplex, build_complex
from conleymorse.conley import index_pair_pf, minimal_morse_decomposition
from conleymorse.dynamics import is_isolated, isolated_completion
from conleymorse.errors import ConleyError
from conleymorse.mvf import MultivectorField
from conleymorse.zigzag import BACKWARD, FORWARD, ZigzagModule


def random_complex(rng: random.Random, max_size: int = 12, max_vertices: int = 5) -> SimplicialComplex:
    while True:
        n = rng.randint(2, max_vertices)
        tops = set()
        for _ in range(rng.randint(1, 4)):
            d = rng.choice((1, 1, 2))
            tops.add(tuple(sorted(rng.sample(range(n), min(d + 1, n)))))
        K = build_complex(tops)
        if len(K) <= max_size:
            return K


def random_partition(
    rng: random.Random, K: SimplicialComplex, within: frozenset[int] | None = None, merges: int | None = None, cap: int = 5
) -> list[frozenset[int]]:
    """Random convex partition built by merging face-adjacent vectors."""
    universe = K.all if within is None else within
    parts = {s: frozenset({s}) for s in universe}
    for _ in range(merges if merges is not None else rng.randint(0, 2 * len(universe))):
        s = rng.choice(sorted(universe))
        nbrs = [t for t in (*K.faces[s], *K.cofaces[s]) if t in universe and parts[t] is not parts[s]]
        if not nbrs:
            continue
        merged = parts[s] | parts[rng.choice(nbrs)]
        if len(merged) <= cap and K.is_convex(merged):
            for t in merged:
                parts[t] = merged
    return sorted(set(parts.values()), key=min)


def random_field(rng: random.Random, K: SimplicialComplex, cap: int = 5) -> MultivectorField:
    return MultivectorField(K, random_partition(rng, K, cap=cap))


def random_split(rng: random.Random, f: MultivectorField) -> MultivectorField:
    """A random refinement: each vector is re-partitioned into convex pieces."""
    K = f.complex
    parts = []
    for V in f.vectors:
        parts += random_partition(rng, K, within=V, merges=rng.randint(0, 2 * len(V)))
    return MultivectorField(K, parts)


def random_isolated_set(rng: random.Random, f: MultivectorField, N: frozenset[int]) -> frozenset[int] | None:
    """A Morse set, or the isolated completion of a random union of Morse sets."""
    try:
        dec = minimal_morse_decomposition(f, N)
    except ConleyError:
        return None
    if not dec.sets:
        return None
    chosen = [m for m in dec.sets if rng.random() < 0.5] or [rng.choice(dec.sets)]
    S = frozenset().union(*chosen)
    try:
        S = isolated_completion(f, N, S)
    except ConleyError:
        return None
    return S if is_isolated(f, N, S) else None


def random_pf_pair(rng: random.Random, f: MultivectorField, N: frozenset[int]):
    S = random_isolated_set(rng, f, N)
    return None if S is None else index_pair_pf(f, N, S)


def random_module(rng: random.Random, max_len: int = 9, max_dim: int = 4, p: int = 2, alternating: bool = False) -> ZigzagModule:
    L = rng.randint(1, max_len)
    dims = [rng.randint(0, max_dim) for _ in range(L)]
    dirs = []
    maps = []
    for i in range(L - 1):
        d = (BACKWARD if i % 2 == 0 else FORWARD) if alternating else rng.choice((FORWARD, BACKWARD))
        src, dst = (dims[i], dims[i + 1]) if d == FORWARD else (dims[i + 1], dims[i])
        M = np.array([[rng.randrange(p) for _ in range(src)] for _ in range(dst)], dtype=np.int64).reshape(dst, src)
        if rng.random() < 0.3 and min(src, dst) > 0:
            r = rng.randint(0, min(src, dst))
            A = np.array([[rng.randrange(p) for _ in range(r)] for _ in range(dst)], dtype=np.int64).reshape(dst, r)
            B = np.array([[rng.randrange(p) for _ in range(src)] for _ in range(r)], dtype=np.int64).reshape(r, src)
            M = (A @ B) % p
        dirs.append(d)
        maps.append(M)
    return ZigzagModule(tuple(dims), tuple(maps), tuple(dirs), p)


def all_subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)
